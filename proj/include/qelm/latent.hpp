#pragma once

#include <string>
#include <vector>

#include "qelm/types.hpp"

namespace qelm {

enum class LatentSource { Pca, Ae, Imported };

// A batch of reduced feature vectors, one row per sample, values inside the
// declared range.
struct LatentBatch {
    Mat values;  // samples x d
    std::vector<int> labels;
    LatentSource source = LatentSource::Imported;
    double range_lo = 0.0;
    double range_hi = 1.0;
    int clamped = 0;  // cells pulled back into range on import

    int size() const { return static_cast<int>(values.rows()); }
    int dim() const { return static_cast<int>(values.cols()); }
};

// Latent CSV: first line `# d=<d> range=[lo,hi]`, then rows `v1,...,vd,label`.
LatentBatch import_latents(const std::string& path, int expected_d);
void export_latents(const std::string& path, const LatentBatch& batch);

}  // namespace qelm
