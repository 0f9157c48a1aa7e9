#pragma once

#include "qelm/types.hpp"

namespace qelm {

// Linear feature reduction: top-d eigenvectors of the sample covariance.
// Components are rows, orthonormal, ordered by descending eigenvalue, with
// the sign fixed so the largest-magnitude entry of each row is positive.
struct PcaModel {
    Vec mean;                // length = input dim
    Mat components;          // d x input dim
    Vec explained_variance;  // d, non-increasing
    // Per-dimension projection range over the training set, used to min-max
    // rescale latents into [0,1] before encoding.
    Vec latent_min;
    Vec latent_max;

    int latent_dim() const { return static_cast<int>(components.rows()); }
};

PcaModel fit_pca(const Mat& images, int d);

// Raw projection, components * (x - mean).
Vec pca_project(const PcaModel& model, const Vec& x);

// Projection followed by the train-set min-max rescale into [0,1].
Vec pca_transform(const PcaModel& model, const Vec& x);
Mat pca_transform_all(const PcaModel& model, const Mat& images);

// Mean reconstruction MSE of the d-dimensional projection on a sample set.
double pca_reconstruction_error(const PcaModel& model, const Mat& images);

}  // namespace qelm
