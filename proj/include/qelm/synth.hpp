#pragma once

#include <cstdint>

#include "qelm/dataset.hpp"

namespace qelm {

// Renders a labeled set of 28x28 digit-glyph images with random placement,
// stroke intensity and pixel noise. Stands in for MNIST when the real IDX
// files are not available; same container format, same value range.
Dataset make_synthetic_digits(int count, std::uint64_t seed, const std::string& split = "train");

// Writes train/test IDX files for `make_synthetic_digits` output into dir.
void write_synthetic_dataset(const std::string& dir, int train_count, int test_count,
                             std::uint64_t seed);

}  // namespace qelm
