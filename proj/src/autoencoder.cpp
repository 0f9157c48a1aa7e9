#include "qelm/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "qelm/rng.hpp"

namespace qelm {

namespace {

Mat apply_act(const Mat& z, Activation act) {
    if (act == Activation::Relu) return z.cwiseMax(0.0);
    return ((-z.array()).exp() + 1.0).inverse().matrix();  // sigmoid
}

Mat act_grad_from_output(const Mat& a, Activation act) {
    if (act == Activation::Relu) return (a.array() > 0.0).cast<double>().matrix();
    return (a.array() * (1.0 - a.array())).matrix();
}

struct AdamState {
    std::vector<Mat> mW, vW;
    std::vector<Vec> mb, vb;
    long step = 0;
};

DenseLayer make_layer(int in, int out, Activation act, std::mt19937_64& rng) {
    // Glorot-uniform init.
    const double limit = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer;
    layer.W.resize(out, in);
    for (Eigen::Index i = 0; i < layer.W.rows(); ++i)
        for (Eigen::Index j = 0; j < layer.W.cols(); ++j) layer.W(i, j) = dist(rng);
    layer.b = Vec::Zero(out);
    layer.act = act;
    return layer;
}

// Forward through a layer stack; batch is samples x units. Returns all
// post-activation values, activations[0] being the input batch.
std::vector<Mat> forward_stack(const std::vector<DenseLayer>& layers, const Mat& input) {
    std::vector<Mat> activations{input};
    for (const auto& layer : layers) {
        Mat z = activations.back() * layer.W.transpose();
        z.rowwise() += layer.b.transpose();
        activations.push_back(apply_act(z, layer.act));
    }
    return activations;
}

double bce_per_pixel(const Mat& pred, const Mat& target) {
    const double eps = 1e-12;
    auto p = pred.array().min(1.0 - eps).max(eps);
    return -(target.array() * p.log() + (1.0 - target.array()) * (1.0 - p).log()).mean();
}

}  // namespace

AutoencoderModel fit_autoencoder(const Mat& images, int d, std::uint64_t seed,
                                 const AeTrainConfig& cfg) {
    if (d < 1) throw std::runtime_error("autoencoder: latent dimension must be positive");
    const int f = static_cast<int>(images.cols());
    const int h1 = std::max(d, static_cast<int>(std::lround(256 * cfg.width_scale)));
    const int h2 = std::max(d, static_cast<int>(std::lround(64 * cfg.width_scale)));

    auto rng = make_rng(seed);
    AutoencoderModel model;
    model.latent_dim = d;
    model.encoder = {make_layer(f, h1, Activation::Relu, rng),
                     make_layer(h1, h2, Activation::Relu, rng),
                     make_layer(h2, d, Activation::Sigmoid, rng)};
    model.decoder = {make_layer(d, h2, Activation::Relu, rng),
                     make_layer(h2, h1, Activation::Relu, rng),
                     make_layer(h1, f, Activation::Sigmoid, rng)};

    // Start the output at the per-pixel base rate. Without this the first
    // epochs chase the mean image through the bottleneck, which tends to
    // saturate the sigmoid latent and strand the encoder.
    for (int j = 0; j < f; ++j) {
        const double p = std::clamp(images.col(j).mean(), 1e-4, 1.0 - 1e-4);
        model.decoder.back().b(j) = std::log(p / (1.0 - p));
    }

    std::vector<DenseLayer*> layers;
    for (auto& l : model.encoder) layers.push_back(&l);
    for (auto& l : model.decoder) layers.push_back(&l);

    AdamState adam;
    for (auto* l : layers) {
        adam.mW.push_back(Mat::Zero(l->W.rows(), l->W.cols()));
        adam.vW.push_back(Mat::Zero(l->W.rows(), l->W.cols()));
        adam.mb.push_back(Vec::Zero(l->b.size()));
        adam.vb.push_back(Vec::Zero(l->b.size()));
    }

    const int n = static_cast<int>(images.rows());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<DenseLayer> all;  // contiguous view for forward/backward
    double epoch_loss = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        epoch_loss = 0.0;
        int batches = 0;
        for (int start = 0; start < n; start += cfg.batch) {
            const int bs = std::min(cfg.batch, n - start);
            Mat batch(bs, f);
            for (int i = 0; i < bs; ++i) batch.row(i) = images.row(order[start + i]);

            all.clear();
            for (auto* l : layers) all.push_back(*l);
            auto acts = forward_stack(all, batch);
            const Mat& pred = acts.back();
            epoch_loss += bce_per_pixel(pred, batch);
            ++batches;

            // BCE + sigmoid output collapses to (pred - target) at the last
            // logit; scaled to match the mean-per-pixel loss reported above.
            Mat delta = (pred - batch) / double(bs * f);
            adam.step++;
            const double corr =
                cfg.lr * std::sqrt(1.0 - std::pow(cfg.beta2, adam.step)) /
                (1.0 - std::pow(cfg.beta1, adam.step));
            for (int li = static_cast<int>(layers.size()) - 1; li >= 0; --li) {
                if (li != static_cast<int>(layers.size()) - 1)
                    delta = delta.cwiseProduct(act_grad_from_output(acts[li + 1], layers[li]->act));
                Mat gW = delta.transpose() * acts[li];
                Vec gb = delta.colwise().sum().transpose();
                Mat next_delta;
                if (li > 0) next_delta = delta * layers[li]->W;

                adam.mW[li] = cfg.beta1 * adam.mW[li] + (1 - cfg.beta1) * gW;
                adam.vW[li] = cfg.beta2 * adam.vW[li] + (1 - cfg.beta2) * gW.cwiseProduct(gW);
                adam.mb[li] = cfg.beta1 * adam.mb[li] + (1 - cfg.beta1) * gb;
                adam.vb[li] = cfg.beta2 * adam.vb[li] + (1 - cfg.beta2) * gb.cwiseProduct(gb);
                layers[li]->W -=
                    corr * adam.mW[li].cwiseQuotient((adam.vW[li].cwiseSqrt().array() + cfg.eps).matrix());
                layers[li]->b -=
                    corr * adam.mb[li].cwiseQuotient((adam.vb[li].cwiseSqrt().array() + cfg.eps).matrix());
                if (li > 0) delta = std::move(next_delta);
            }
        }
        epoch_loss /= std::max(1, batches);
        if (!std::isfinite(epoch_loss)) throw std::runtime_error("autoencoder: training diverged");
    }
    model.final_train_loss = epoch_loss;
    return model;
}

Vec ae_encode(const AutoencoderModel& model, const Vec& x) {
    if (x.size() != model.encoder.front().W.cols())
        throw std::runtime_error("autoencoder: input dimension mismatch");
    Mat a = x.transpose();
    for (const auto& layer : model.encoder) {
        Mat z = a * layer.W.transpose();
        z.rowwise() += layer.b.transpose();
        a = apply_act(z, layer.act);
    }
    return a.row(0).transpose();
}

Mat ae_encode_all(const AutoencoderModel& model, const Mat& images) {
    Mat a = images;
    for (const auto& layer : model.encoder) {
        Mat z = a * layer.W.transpose();
        z.rowwise() += layer.b.transpose();
        a = apply_act(z, layer.act);
    }
    return a;
}

Vec ae_decode(const AutoencoderModel& model, const Vec& z) {
    Mat a = z.transpose();
    for (const auto& layer : model.decoder) {
        Mat zz = a * layer.W.transpose();
        zz.rowwise() += layer.b.transpose();
        a = apply_act(zz, layer.act);
    }
    return a.row(0).transpose();
}

double ae_reconstruction_loss(const AutoencoderModel& model, const Mat& images) {
    Mat a = ae_encode_all(model, images);
    for (const auto& layer : model.decoder) {
        Mat z = a * layer.W.transpose();
        z.rowwise() += layer.b.transpose();
        a = apply_act(z, layer.act);
    }
    return bce_per_pixel(a, images);
}

namespace {

void write_layer(std::ostream& out, const DenseLayer& l) {
    out << (l.act == Activation::Relu ? "relu" : "sigmoid") << " " << l.W.rows() << " "
        << l.W.cols() << "\n";
    out.write(reinterpret_cast<const char*>(l.W.data()),
              static_cast<std::streamsize>(sizeof(double) * l.W.size()));
    out.write(reinterpret_cast<const char*>(l.b.data()),
              static_cast<std::streamsize>(sizeof(double) * l.b.size()));
}

DenseLayer read_layer(std::istream& in) {
    std::string act;
    Eigen::Index rows, cols;
    in >> act >> rows >> cols;
    in.get();  // newline
    DenseLayer l;
    l.act = act == "relu" ? Activation::Relu : Activation::Sigmoid;
    l.W.resize(rows, cols);
    l.b.resize(rows);
    in.read(reinterpret_cast<char*>(l.W.data()),
            static_cast<std::streamsize>(sizeof(double) * l.W.size()));
    in.read(reinterpret_cast<char*>(l.b.data()),
            static_cast<std::streamsize>(sizeof(double) * l.b.size()));
    if (!in) throw std::runtime_error("autoencoder: truncated model file");
    return l;
}

}  // namespace

void save_autoencoder(const AutoencoderModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("autoencoder: cannot write " + path);
    out << "qelm-ae v1 " << model.latent_dim << " " << model.encoder.size() << " "
        << model.decoder.size() << " " << model.final_train_loss << "\n";
    for (const auto& l : model.encoder) write_layer(out, l);
    for (const auto& l : model.decoder) write_layer(out, l);
}

AutoencoderModel load_autoencoder(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("autoencoder: cannot open " + path);
    std::string tag, version;
    std::size_t ne, nd;
    AutoencoderModel model;
    in >> tag >> version >> model.latent_dim >> ne >> nd >> model.final_train_loss;
    if (tag != "qelm-ae" || version != "v1")
        throw std::runtime_error("autoencoder: unrecognized model file " + path);
    in.get();
    for (std::size_t i = 0; i < ne; ++i) model.encoder.push_back(read_layer(in));
    for (std::size_t i = 0; i < nd; ++i) model.decoder.push_back(read_layer(in));
    return model;
}

}  // namespace qelm
