#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qelm/types.hpp"

namespace qelm {

// Single fully-connected layer with softmax output; the only trained part
// of the pipeline.
struct SoftmaxModel {
    Mat W;  // classes x features
    Vec b;  // classes

    int classes() const { return static_cast<int>(W.rows()); }
    int features() const { return static_cast<int>(W.cols()); }
};

struct TrainConfig {
    double lr = 1e-3;
    int batch = 128;
    int epochs = 30;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;
    // Early stop on held-out loss; 0 patience disables it (and the split).
    int patience = 5;
    double val_fraction = 0.1;
};

struct EpochStats {
    int epoch;
    double loss;
    double train_acc;
    double val_acc;  // -1 when no validation split
};

struct TrainTrace {
    std::vector<EpochStats> epochs;
};

struct SoftmaxGrad {
    Mat dW;
    Vec db;
};

Vec softmax_forward(const SoftmaxModel& model, const Vec& x);

// Mean categorical cross-entropy over the batch plus its analytic gradient.
std::pair<double, SoftmaxGrad> loss_and_grad(const SoftmaxModel& model, const Mat& features,
                                             const std::vector<int>& labels);

SoftmaxModel train_softmax(const Mat& features, const std::vector<int>& labels, int classes,
                           const TrainConfig& cfg, TrainTrace* trace = nullptr);

// Fraction of argmax-correct predictions; argmax ties go to the lowest index.
double evaluate(const SoftmaxModel& model, const Mat& features, const std::vector<int>& labels);

void save_softmax(const SoftmaxModel& model, const std::string& path);
SoftmaxModel load_softmax(const std::string& path);
void write_trace_csv(const TrainTrace& trace, const std::string& path);

}  // namespace qelm
