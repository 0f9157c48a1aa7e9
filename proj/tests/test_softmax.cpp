#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "qelm/softmax.hpp"

using namespace qelm;

namespace {

SoftmaxModel random_model(int classes, int features, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SoftmaxModel m{Mat(classes, features), Vec(classes)};
    for (int c = 0; c < classes; ++c) {
        for (int f = 0; f < features; ++f) m.W(c, f) = gauss(rng);
        m.b(c) = gauss(rng);
    }
    return m;
}

}  // namespace

TEST_CASE("forward: uniform at zero weights, shift invariance, saturation") {
    SoftmaxModel zero{Mat::Zero(10, 4), Vec::Zero(10)};
    Vec p = softmax_forward(zero, Vec::Ones(4));
    for (int c = 0; c < 10; ++c) CHECK(p(c) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));

    SoftmaxModel m = random_model(5, 3, 1);
    Vec x = Vec::Random(3);
    Vec base = softmax_forward(m, x);
    SoftmaxModel shifted = m;
    shifted.b.array() += 7.5;  // constant logit shift
    CHECK((softmax_forward(shifted, x) - base).cwiseAbs().maxCoeff() < 1e-12);

    SoftmaxModel sat{Mat::Zero(3, 2), Vec::Zero(3)};
    sat.b(0) = 50.0;
    CHECK(softmax_forward(sat, Vec::Zero(2))(0) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS(softmax_forward(m, Vec::Zero(7)));
}

TEST_CASE("loss closed forms") {
    SoftmaxModel m{Mat::Zero(2, 1), Vec::Zero(2)};
    Mat x = Mat::Zero(1, 1);
    auto [loss, grad] = loss_and_grad(m, x, {0});
    CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // d(logits) = p - onehot = (-0.5, 0.5); with x = 0 it lands in db.
    CHECK(grad.db(0) == doctest::Approx(-0.5));
    CHECK(grad.db(1) == doctest::Approx(0.5));

    // Saturated correct prediction: loss ~ 0.
    SoftmaxModel sure{Mat::Zero(2, 1), (Vec(2) << 40.0, -40.0).finished()};
    auto [tiny, g2] = loss_and_grad(sure, x, {0});
    CHECK(tiny <= 1e-6);
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    for (int rep = 0; rep < 5; ++rep) {
        const int classes = 3 + rep % 2, features = 4, batch = 6;
        SoftmaxModel m = random_model(classes, features, 100 + rep);
        Mat x(batch, features);
        std::vector<int> y(batch);
        for (int i = 0; i < batch; ++i) {
            for (int f = 0; f < features; ++f) x(i, f) = gauss(rng);
            y[i] = i % classes;
        }
        auto [loss, grad] = loss_and_grad(m, x, y);

        const double h = 1e-5;
        for (int c = 0; c < classes; ++c)
            for (int f = 0; f < features; ++f) {
                SoftmaxModel up = m, down = m;
                up.W(c, f) += h;
                down.W(c, f) -= h;
                const double fd = (loss_and_grad(up, x, y).first -
                                   loss_and_grad(down, x, y).first) / (2 * h);
                const double denom = std::max(std::abs(fd), 1e-8);
                CHECK(std::abs(grad.dW(c, f) - fd) / denom < 1e-4);
            }
        for (int c = 0; c < classes; ++c) {
            SoftmaxModel up = m, down = m;
            up.b(c) += h;
            down.b(c) -= h;
            const double fd =
                (loss_and_grad(up, x, y).first - loss_and_grad(down, x, y).first) / (2 * h);
            const double denom = std::max(std::abs(fd), 1e-8);
            CHECK(std::abs(grad.db(c) - fd) / denom < 1e-4);
        }
    }
}

TEST_CASE("training separates two far blobs") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    const int n = 200;
    Mat x(n, 2);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
        const int cls = i % 2;
        x(i, 0) = gauss(rng) + (cls ? 8.0 : -8.0);
        x(i, 1) = gauss(rng) + (cls ? 8.0 : -8.0);
        y[i] = cls;
    }
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.lr = 0.05;
    cfg.patience = 0;  // no held-out split for the toy problem
    SoftmaxModel model = train_softmax(x, y, 2, cfg);
    CHECK(evaluate(model, x, y) == 1.0);
}

TEST_CASE("epoch count validation and divergence reporting") {
    Mat x = Mat::Random(10, 2);
    std::vector<int> y(10, 0);
    TrainConfig cfg;
    cfg.epochs = 0;
    CHECK_THROWS(train_softmax(x, y, 2, cfg));
    cfg.epochs = 1;
    cfg.lr = -1;
    CHECK_THROWS(train_softmax(x, y, 2, cfg));
}

TEST_CASE("full-batch loss is non-increasing on the convex objective") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss;
    const int n = 64;
    Mat x(n, 3);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
        for (int f = 0; f < 3; ++f) x(i, f) = gauss(rng);
        y[i] = i % 3;
    }
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.lr = 1e-3;
    cfg.batch = n;  // full batch
    cfg.patience = 0;
    TrainTrace trace;
    train_softmax(x, y, 3, cfg, &trace);
    for (std::size_t e = 1; e < trace.epochs.size(); ++e)
        CHECK(trace.epochs[e].loss <= trace.epochs[e - 1].loss + 1e-9);
}

TEST_CASE("determinism: same seed, same weights") {
    Mat x = Mat::Random(50, 4);
    std::vector<int> y(50);
    for (int i = 0; i < 50; ++i) y[i] = i % 3;
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = 123;
    SoftmaxModel a = train_softmax(x, y, 3, cfg);
    SoftmaxModel b = train_softmax(x, y, 3, cfg);
    CHECK((a.W - b.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.b - b.b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("evaluation: perfect, chance level, tie-breaking") {
    // Model that copies feature index to class logit: feature one-hot = class.
    SoftmaxModel ident{Mat::Identity(4, 4), Vec::Zero(4)};
    Mat x = Mat::Identity(4, 4);
    CHECK(evaluate(ident, x, {0, 1, 2, 3}) == 1.0);
    CHECK(evaluate(ident, x, {1, 0, 3, 2}) == 0.0);

    // Uniform model on a balanced set scores chance by lowest-index ties.
    SoftmaxModel zero{Mat::Zero(10, 4), Vec::Zero(10)};
    Mat xs = Mat::Random(1000, 4);
    std::vector<int> labels(1000);
    for (int i = 0; i < 1000; ++i) labels[i] = i % 10;
    CHECK(evaluate(zero, xs, labels) == doctest::Approx(0.1));
}

TEST_CASE("model persistence round trip") {
    SoftmaxModel m = random_model(10, 16, 77);
    const auto path = std::filesystem::temp_directory_path() / "qelm-softmax-test.bin";
    save_softmax(m, path.string());
    SoftmaxModel loaded = load_softmax(path.string());
    std::filesystem::remove(path);
    CHECK((m.W - loaded.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m.b - loaded.b).cwiseAbs().maxCoeff() == 0.0);
}
