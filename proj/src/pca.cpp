#include "qelm/pca.hpp"

#include <stdexcept>

namespace qelm {

PcaModel fit_pca(const Mat& images, int d) {
    const Eigen::Index n = images.rows();
    const Eigen::Index f = images.cols();
    if (d < 1 || d > f) throw std::runtime_error("pca: latent dimension out of range");
    if (n < d + 1) throw std::runtime_error("pca: need at least d+1 samples");

    PcaModel model;
    model.mean = images.colwise().mean();
    Mat centered = images.rowwise() - model.mean.transpose();
    Mat cov = (centered.transpose() * centered) / double(n - 1);

    Eigen::SelfAdjointEigenSolver<Mat> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("pca: eigendecomposition failed");

    // Eigen returns ascending eigenvalues; take the top d in descending order.
    model.components.resize(d, f);
    model.explained_variance.resize(d);
    for (int k = 0; k < d; ++k) {
        const Eigen::Index src = f - 1 - k;
        Vec comp = solver.eigenvectors().col(src);
        Eigen::Index imax;
        comp.cwiseAbs().maxCoeff(&imax);
        if (comp(imax) < 0) comp = -comp;
        model.components.row(k) = comp.transpose();
        model.explained_variance(k) = std::max(0.0, solver.eigenvalues()(src));
    }

    Mat latents = centered * model.components.transpose();  // n x d
    model.latent_min = latents.colwise().minCoeff();
    model.latent_max = latents.colwise().maxCoeff();
    return model;
}

Vec pca_project(const PcaModel& model, const Vec& x) {
    if (x.size() != model.mean.size()) throw std::runtime_error("pca: dimension mismatch");
    return model.components * (x - model.mean);
}

Vec pca_transform(const PcaModel& model, const Vec& x) {
    Vec z = pca_project(model, x);
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        const double span = model.latent_max(k) - model.latent_min(k);
        z(k) = span > 0 ? (z(k) - model.latent_min(k)) / span : 0.0;
        z(k) = std::clamp(z(k), 0.0, 1.0);
    }
    return z;
}

Mat pca_transform_all(const PcaModel& model, const Mat& images) {
    Mat out(images.rows(), model.latent_dim());
    for (Eigen::Index i = 0; i < images.rows(); ++i)
        out.row(i) = pca_transform(model, images.row(i).transpose()).transpose();
    return out;
}

double pca_reconstruction_error(const PcaModel& model, const Mat& images) {
    Mat centered = images.rowwise() - model.mean.transpose();
    Mat proj = centered * model.components.transpose();
    Mat recon = proj * model.components;
    return (centered - recon).squaredNorm() / double(images.rows() * images.cols());
}

}  // namespace qelm
