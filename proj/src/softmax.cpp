#include "qelm/softmax.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qelm/rng.hpp"

namespace qelm {

namespace {

// Row-wise softmax with log-sum-exp stabilization.
Mat softmax_rows(Mat logits) {
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const double m = logits.row(i).maxCoeff();
        logits.row(i) = (logits.row(i).array() - m).exp();
        logits.row(i) /= logits.row(i).sum();
    }
    return logits;
}

Mat batch_logits(const SoftmaxModel& model, const Mat& features) {
    Mat logits = features * model.W.transpose();
    logits.rowwise() += model.b.transpose();
    return logits;
}

double mean_cross_entropy(const Mat& probs, const std::vector<int>& labels) {
    double loss = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        loss -= std::log(std::max(probs(static_cast<Eigen::Index>(i), labels[i]), 1e-300));
    return loss / double(labels.size());
}

double accuracy_from_probs(const Mat& probs, const std::vector<int>& labels) {
    int correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        Eigen::Index argmax = 0;
        double best = probs(static_cast<Eigen::Index>(i), 0);
        for (Eigen::Index c = 1; c < probs.cols(); ++c)
            if (probs(static_cast<Eigen::Index>(i), c) > best) {  // strict: ties keep lowest index
                best = probs(static_cast<Eigen::Index>(i), c);
                argmax = c;
            }
        if (argmax == labels[i]) ++correct;
    }
    return double(correct) / double(labels.size());
}

}  // namespace

Vec softmax_forward(const SoftmaxModel& model, const Vec& x) {
    if (x.size() != model.W.cols()) throw std::runtime_error("softmax: dimension mismatch");
    Vec logits = model.W * x + model.b;
    const double m = logits.maxCoeff();
    Vec p = (logits.array() - m).exp();
    return p / p.sum();
}

std::pair<double, SoftmaxGrad> loss_and_grad(const SoftmaxModel& model, const Mat& features,
                                             const std::vector<int>& labels) {
    if (features.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::runtime_error("softmax: feature/label count mismatch");
    for (int l : labels)
        if (l < 0 || l >= model.classes()) throw std::runtime_error("softmax: label out of range");

    Mat probs = softmax_rows(batch_logits(model, features));
    const double loss = mean_cross_entropy(probs, labels);

    // d(logits) = p - onehot(y), averaged over the batch.
    Mat dlogits = probs;
    for (std::size_t i = 0; i < labels.size(); ++i)
        dlogits(static_cast<Eigen::Index>(i), labels[i]) -= 1.0;
    dlogits /= double(labels.size());

    SoftmaxGrad grad;
    grad.dW = dlogits.transpose() * features;
    grad.db = dlogits.colwise().sum().transpose();
    return {loss, grad};
}

SoftmaxModel train_softmax(const Mat& features, const std::vector<int>& labels, int classes,
                           const TrainConfig& cfg, TrainTrace* trace) {
    if (cfg.epochs < 1) throw std::runtime_error("softmax: epochs must be >= 1");
    if (cfg.lr <= 0) throw std::runtime_error("softmax: learning rate must be positive");
    const int n = static_cast<int>(features.rows());
    const int f = static_cast<int>(features.cols());

    auto rng = make_rng(cfg.seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    // Optional held-out tail for early stopping.
    int n_val = cfg.patience > 0 ? static_cast<int>(n * cfg.val_fraction) : 0;
    if (n_val > 0) std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> train_idx(order.begin(), order.end() - n_val);
    std::vector<int> val_idx(order.end() - n_val, order.end());

    SoftmaxModel model{Mat::Zero(classes, f), Vec::Zero(classes)};
    Mat mW = Mat::Zero(classes, f), vW = Mat::Zero(classes, f);
    Vec mb = Vec::Zero(classes), vb = Vec::Zero(classes);
    long step = 0;

    SoftmaxModel best = model;
    double best_val_loss = std::numeric_limits<double>::infinity();
    int stale = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(train_idx.begin(), train_idx.end(), rng);
        double epoch_loss = 0.0;
        int batches = 0;
        for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch) {
            const int bs = static_cast<int>(
                std::min<std::size_t>(cfg.batch, train_idx.size() - start));
            Mat bx(bs, f);
            std::vector<int> by(bs);
            for (int i = 0; i < bs; ++i) {
                bx.row(i) = features.row(train_idx[start + i]);
                by[i] = labels[train_idx[start + i]];
            }
            auto [loss, grad] = loss_and_grad(model, bx, by);
            if (!std::isfinite(loss)) throw std::runtime_error("softmax: training diverged");
            epoch_loss += loss;
            ++batches;

            ++step;
            const double corr = cfg.lr * std::sqrt(1.0 - std::pow(cfg.beta2, step)) /
                                (1.0 - std::pow(cfg.beta1, step));
            mW = cfg.beta1 * mW + (1 - cfg.beta1) * grad.dW;
            vW = cfg.beta2 * vW + (1 - cfg.beta2) * grad.dW.cwiseProduct(grad.dW);
            mb = cfg.beta1 * mb + (1 - cfg.beta1) * grad.db;
            vb = cfg.beta2 * vb + (1 - cfg.beta2) * grad.db.cwiseProduct(grad.db);
            model.W -= corr * mW.cwiseQuotient((vW.cwiseSqrt().array() + cfg.eps).matrix());
            model.b -= corr * mb.cwiseQuotient((vb.cwiseSqrt().array() + cfg.eps).matrix());
        }

        EpochStats stats{epoch, epoch_loss / std::max(1, batches), 0.0, -1.0};
        {
            Mat probs = softmax_rows(batch_logits(model, features));
            stats.train_acc = accuracy_from_probs(probs, labels);
        }
        if (n_val > 0) {
            Mat vx(n_val, f);
            std::vector<int> vy(n_val);
            for (int i = 0; i < n_val; ++i) {
                vx.row(i) = features.row(val_idx[i]);
                vy[i] = labels[val_idx[i]];
            }
            Mat probs = softmax_rows(batch_logits(model, vx));
            const double val_loss = mean_cross_entropy(probs, vy);
            stats.val_acc = accuracy_from_probs(probs, vy);
            if (val_loss < best_val_loss) {
                best_val_loss = val_loss;
                best = model;
                stale = 0;
            } else if (++stale >= cfg.patience) {
                if (trace) trace->epochs.push_back(stats);
                return best;
            }
        }
        if (trace) trace->epochs.push_back(stats);
    }
    return n_val > 0 ? best : model;
}

double evaluate(const SoftmaxModel& model, const Mat& features, const std::vector<int>& labels) {
    Mat probs = softmax_rows(batch_logits(model, features));
    return accuracy_from_probs(probs, labels);
}

void save_softmax(const SoftmaxModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("softmax: cannot write " + path);
    out << "qelm-softmax v1 " << model.classes() << " " << model.features() << "\n";
    out.write(reinterpret_cast<const char*>(model.W.data()),
              static_cast<std::streamsize>(sizeof(double) * model.W.size()));
    out.write(reinterpret_cast<const char*>(model.b.data()),
              static_cast<std::streamsize>(sizeof(double) * model.b.size()));
}

SoftmaxModel load_softmax(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("softmax: cannot open " + path);
    std::string tag, version;
    int classes, features;
    in >> tag >> version >> classes >> features;
    if (tag != "qelm-softmax" || version != "v1")
        throw std::runtime_error("softmax: unrecognized model file " + path);
    in.get();
    SoftmaxModel model{Mat(classes, features), Vec(classes)};
    in.read(reinterpret_cast<char*>(model.W.data()),
            static_cast<std::streamsize>(sizeof(double) * model.W.size()));
    in.read(reinterpret_cast<char*>(model.b.data()),
            static_cast<std::streamsize>(sizeof(double) * model.b.size()));
    if (!in) throw std::runtime_error("softmax: truncated model file " + path);
    return model;
}

void write_trace_csv(const TrainTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("softmax: cannot write " + path);
    out << "epoch,loss,train_acc,val_acc\n";
    for (const auto& e : trace.epochs)
        out << e.epoch << "," << e.loss << "," << e.train_acc << "," << e.val_acc << "\n";
}

}  // namespace qelm
