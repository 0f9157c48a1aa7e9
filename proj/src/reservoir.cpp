#include "qelm/reservoir.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qelm/rng.hpp"

namespace qelm {

Boundary boundary_from_string(const std::string& s) {
    if (s == "open") return Boundary::Open;
    if (s == "periodic") return Boundary::Periodic;
    throw std::runtime_error("reservoir: unknown boundary '" + s + "'");
}

DisorderRegime regime_from_string(const std::string& s) {
    if (s == "localized") return DisorderRegime::Localized;
    if (s == "transition") return DisorderRegime::Transition;
    if (s == "mbl") return DisorderRegime::Mbl;
    throw std::runtime_error("reservoir: unknown disorder regime '" + s + "'");
}

CMat pauli_string(int n_qubits, const std::map<int, char>& assignments) {
    const std::size_t dim = dim_for_qubits(n_qubits);
    std::size_t xmask = 0;  // bits flipped by X or Y factors
    for (const auto& [site, p] : assignments) {
        if (site < 0 || site >= n_qubits) throw std::runtime_error("pauli: site out of range");
        if (p != 'X' && p != 'Y' && p != 'Z') throw std::runtime_error("pauli: unknown operator");
        if (p == 'X' || p == 'Y') xmask |= std::size_t{1} << (n_qubits - 1 - site);
    }

    CMat m = CMat::Zero(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        complex coeff = 1.0;
        for (const auto& [site, p] : assignments) {
            const bool bit = (col >> (n_qubits - 1 - site)) & 1;
            if (p == 'Z') coeff *= bit ? -1.0 : 1.0;
            else if (p == 'Y') coeff *= bit ? complex(0, -1) : complex(0, 1);
        }
        m(col ^ xmask, col) = coeff;
    }
    return m;
}

namespace {

// Bond list for a chain; periodic adds the wrap-around bond for n >= 3.
std::vector<std::pair<int, int>> chain_bonds(int n, Boundary boundary) {
    std::vector<std::pair<int, int>> bonds;
    for (int i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
    if (boundary == Boundary::Periodic && n >= 3) bonds.emplace_back(n - 1, 0);
    return bonds;
}

CMat two_site(int n, int i, int j, char pi, char pj) {
    return pauli_string(n, {{i, pi}, {j, pj}});
}

}  // namespace

FloquetPair build_h1_pair(int n_qubits) {
    const double b1 = 3.05;
    const double j0 = 0.06;
    const double alpha = 1.51;
    const std::size_t dim = dim_for_qubits(n_qubits);

    FloquetPair pair;
    pair.ha = CMat::Zero(dim, dim);
    for (int i = 0; i < n_qubits; ++i) pair.ha += b1 * pauli_string(n_qubits, {{i, 'X'}});

    if (n_qubits < 2) throw std::runtime_error("h1: interaction term needs at least 2 qubits");
    pair.hb = CMat::Zero(dim, dim);
    for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j)
            pair.hb += (j0 / std::pow(double(j - i), alpha)) * two_site(n_qubits, i, j, 'Z', 'Z');
    return pair;
}

CMat build_h2(int n_qubits, std::uint64_t seed, bool j_scale_zero) {
    const std::size_t dim = dim_for_qubits(n_qubits);
    auto rng = make_rng(seed);
    std::normal_distribution<double> coupling(0.75, 0.1);
    std::normal_distribution<double> field(1.0, 0.1);

    CMat h = CMat::Zero(dim, dim);
    // Couplings are drawn even when zeroed so the field draw is unchanged
    // between the interacting run and its control.
    for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j) {
            const double jij = coupling(rng);
            if (!j_scale_zero) h += jij * two_site(n_qubits, i, j, 'Z', 'Z');
        }
    for (int i = 0; i < n_qubits; ++i) h += field(rng) * pauli_string(n_qubits, {{i, 'X'}});
    return h;
}

CMat build_h3(int n_qubits) {
    const double j3 = -1.0, b3x = 0.7, b3z = 1.5;
    const std::size_t dim = dim_for_qubits(n_qubits);
    CMat h = CMat::Zero(dim, dim);
    for (int i = 0; i + 1 < n_qubits; ++i) h += j3 * two_site(n_qubits, i, i + 1, 'Z', 'Z');
    for (int i = 0; i < n_qubits; ++i) {
        h += b3z * pauli_string(n_qubits, {{i, 'Z'}});
        h += b3x * pauli_string(n_qubits, {{i, 'X'}});
    }
    return h;
}

CMat build_h4(int n_qubits, Boundary boundary) {
    const double jx = 2.0, jy = 2.0, jz = 0.54, bz = 0.54;
    const std::size_t dim = dim_for_qubits(n_qubits);
    CMat h = CMat::Zero(dim, dim);
    for (auto [i, j] : chain_bonds(n_qubits, boundary)) {
        h += -0.5 * jx * two_site(n_qubits, i, j, 'X', 'X');
        h += -0.5 * jy * two_site(n_qubits, i, j, 'Y', 'Y');
        h += -0.5 * jz * two_site(n_qubits, i, j, 'Z', 'Z');
    }
    for (int i = 0; i < n_qubits; ++i) h += -0.5 * bz * pauli_string(n_qubits, {{i, 'Z'}});
    return h;
}

CMat build_h5(int n_qubits, Boundary boundary) {
    const std::size_t dim = dim_for_qubits(n_qubits);
    CMat h = CMat::Zero(dim, dim);
    for (auto [i, j] : chain_bonds(n_qubits, boundary)) {
        h += 0.5 * two_site(n_qubits, i, j, 'X', 'X');
        h += 0.5 * two_site(n_qubits, i, j, 'Y', 'Y');
    }
    return h;
}

CMat build_h6(int n_qubits, DisorderRegime regime, std::uint64_t seed) {
    double b6 = 0.0, w = 0.0;
    switch (regime) {
        case DisorderRegime::Localized: b6 = 2e-2; w = 2e-2; break;
        case DisorderRegime::Transition: b6 = 0.03; w = 1.0; break;
        case DisorderRegime::Mbl: b6 = 0.03; w = 60.0; break;
    }
    const std::size_t dim = dim_for_qubits(n_qubits);
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> coupling(-0.5, 0.5);
    std::uniform_real_distribution<double> disorder(-w, w);

    CMat h = CMat::Zero(dim, dim);
    for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j)
            h += coupling(rng) * two_site(n_qubits, i, j, 'X', 'X');
    for (int i = 0; i < n_qubits; ++i)
        h += 0.5 * (b6 + disorder(rng)) * pauli_string(n_qubits, {{i, 'Z'}});
    return h;
}

CMat propagator_static(const CMat& h, double dt) {
    if (hermiticity_error(h) > 1e-10)
        throw std::runtime_error("propagator: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("propagator: eigendecomposition failed");
    CVec phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::polar(1.0, -solver.eigenvalues()(k) * dt);
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

CMat propagator_floquet(const CMat& ha, const CMat& hb, int periods, double t1) {
    if (ha.rows() != hb.rows()) throw std::runtime_error("floquet: dimension mismatch");
    if (periods < 0) throw std::runtime_error("floquet: negative period count");
    // Ha acts first within each period.
    CMat period = propagator_static(hb, t1) * propagator_static(ha, t1);
    CMat u = CMat::Identity(ha.rows(), ha.cols());
    CMat base = period;
    int p = periods;
    while (p > 0) {  // square-and-multiply
        if (p & 1) u = u * base;
        p >>= 1;
        if (p > 0) base = base * base;
    }
    return u;
}

CVec evolve(const CMat& u, const CVec& psi) {
    if (u.cols() != psi.size()) throw std::runtime_error("evolve: dimension mismatch");
    return u * psi;
}

CMat evolve_batch_serial(const CMat& u, const CMat& states) {
    if (u.cols() != states.rows()) throw std::runtime_error("evolve: dimension mismatch");
    CMat out(states.rows(), states.cols());
    for (Eigen::Index s = 0; s < states.cols(); ++s) out.col(s) = u * states.col(s);
    return out;
}

CMat evolve_batch(const CMat& u, const CMat& states) {
    if (u.cols() != states.rows()) throw std::runtime_error("evolve: dimension mismatch");
    CMat out(states.rows(), states.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (Eigen::Index s = 0; s < states.cols(); ++s) out.col(s) = u * states.col(s);
    return out;
}

double hermiticity_error(const CMat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const CMat& u) {
    return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace qelm
