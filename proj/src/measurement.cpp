#include "qelm/measurement.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "qelm/rng.hpp"

namespace qelm {

Vec measure_exact(const CVec& psi) {
    const double norm2 = psi.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw std::runtime_error("measure: state is not normalized");
    Vec p = psi.cwiseAbs2() / norm2;
    return p;
}

Vec measure_shots(const CVec& psi, long shots, std::uint64_t seed) {
    if (shots < 1) throw std::runtime_error("measure: shots must be >= 1");
    Vec p = measure_exact(psi);
    auto rng = make_rng(seed);
    std::discrete_distribution<long> outcome(p.data(), p.data() + p.size());
    Vec counts = Vec::Zero(p.size());
    for (long s = 0; s < shots; ++s) counts(outcome(rng)) += 1.0;
    return counts / double(shots);
}

Mat measure_batch_serial(const CMat& states) {
    Mat features(states.cols(), states.rows());
    for (Eigen::Index s = 0; s < states.cols(); ++s)
        features.row(s) = measure_exact(states.col(s)).transpose();
    return features;
}

Mat measure_batch(const CMat& states) {
    Mat features(states.cols(), states.rows());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (Eigen::Index s = 0; s < states.cols(); ++s)
        features.row(s) = measure_exact(states.col(s)).transpose();
    return features;
}

}  // namespace qelm
