#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qelm/types.hpp"

namespace qelm {

// Labeled image set. Rows of `images` are flattened 28x28 pictures with
// pixel values already normalized into [0,1].
struct Dataset {
    Mat images;               // samples x features, row per sample
    std::vector<int> labels;  // class index per sample, 0..9
    std::string split;        // "train" | "test"

    int size() const { return static_cast<int>(labels.size()); }
    int features() const { return static_cast<int>(images.cols()); }
};

// IDX container I/O (big-endian headers, magic 0x803 for images, 0x801 for labels).
Mat load_idx_images(const std::string& path);
std::vector<int> load_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const Mat& images, int rows = 28, int cols = 28);
void write_idx_labels(const std::string& path, const std::vector<int>& labels);

Dataset assemble_dataset(Mat images, std::vector<int> labels, std::string split);

// Deterministic k-element subset, order given by a seeded shuffle.
Dataset subsample(const Dataset& ds, int k, std::uint64_t seed);

// Loads <dir>/{train,t10k}-{images-idx3,labels-idx1}-ubyte.
Dataset load_split(const std::string& dir, const std::string& split);

}  // namespace qelm
