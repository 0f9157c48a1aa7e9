#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qelm/types.hpp"

namespace qelm {

enum class Activation { Relu, Sigmoid };

struct DenseLayer {
    Mat W;  // out x in
    Vec b;  // out
    Activation act;
};

struct AeTrainConfig {
    int epochs = 50;
    // Small batches matter here: the sigmoid bottleneck only escapes its
    // saturated units given enough optimizer steps per epoch.
    int batch = 32;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    // Scales the two hidden widths (256, 64); stands in for the capacity gap
    // between the larger and smaller reference architectures.
    double width_scale = 1.0;
};

// Dense autoencoder 784 -> 256 -> 64 -> d -> 64 -> 256 -> 784, relu hidden
// layers, sigmoid latent and output, trained with Adam on binary cross-entropy.
struct AutoencoderModel {
    std::vector<DenseLayer> encoder;
    std::vector<DenseLayer> decoder;
    int latent_dim = 0;
    double final_train_loss = 0.0;  // mean BCE per pixel at the last epoch
};

AutoencoderModel fit_autoencoder(const Mat& images, int d, std::uint64_t seed,
                                 const AeTrainConfig& cfg = {});

Vec ae_encode(const AutoencoderModel& model, const Vec& x);
Mat ae_encode_all(const AutoencoderModel& model, const Mat& images);
Vec ae_decode(const AutoencoderModel& model, const Vec& z);

// Mean binary cross-entropy per pixel of encode-decode on a sample set.
double ae_reconstruction_loss(const AutoencoderModel& model, const Mat& images);

void save_autoencoder(const AutoencoderModel& model, const std::string& path);
AutoencoderModel load_autoencoder(const std::string& path);

}  // namespace qelm
