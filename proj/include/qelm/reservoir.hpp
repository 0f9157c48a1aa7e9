#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qelm/types.hpp"

namespace qelm {

enum class Boundary { Open, Periodic };
enum class DisorderRegime { Localized, Transition, Mbl };

Boundary boundary_from_string(const std::string& s);
DisorderRegime regime_from_string(const std::string& s);

// Tensor product of Pauli operators on the given sites, identity elsewhere.
// Qubit 0 is the most significant bit of the computational-basis index.
CMat pauli_string(int n_qubits, const std::map<int, char>& assignments);

// Piecewise Floquet pair: Ha = B1 * sum_i X_i, Hb = sum_{i<j} J0/|i-j|^a Z_i Z_j.
struct FloquetPair {
    CMat ha;
    CMat hb;
};
FloquetPair build_h1_pair(int n_qubits);

// All-to-all ZZ couplings ~ N(0.75,0.1) plus transverse fields ~ N(1,0.1);
// j_scale_zero drops the couplings entirely (the non-interacting control).
CMat build_h2(int n_qubits, std::uint64_t seed, bool j_scale_zero = false);

// Nearest-neighbour Ising chain with longitudinal and transverse fields in
// the chaotic regime (J = -1, Bz = 1.5, Bx = 0.7).
CMat build_h3(int n_qubits);

// Heisenberg XXZ chain, -1/2 * sum(2 XX + 2 YY + 0.54 ZZ + 0.54 Z).
CMat build_h4(int n_qubits, Boundary boundary = Boundary::Open);

// Integrable XX chain, 1/2 * sum(XX + YY).
CMat build_h5(int n_qubits, Boundary boundary = Boundary::Open);

// Random all-to-all XX couplings in [-0.5,0.5] plus disordered z fields;
// the regime picks (B6, W) per the localization phase diagram.
CMat build_h6(int n_qubits, DisorderRegime regime, std::uint64_t seed);

// U = exp(-i H dt) via eigendecomposition of the Hermitian H.
CMat propagator_static(const CMat& h, double dt);

// One Floquet period is exp(-i Hb T1) * exp(-i Ha T1) with T1 = 0.5; the
// full propagator is that unitary raised to `periods`.
CMat propagator_floquet(const CMat& ha, const CMat& hb, int periods, double t1 = 0.5);

CVec evolve(const CMat& u, const CVec& psi);

// Batch evolution of column states; the OpenMP version is the production
// path, the serial one is the reference kept for testing and benchmarks.
CMat evolve_batch(const CMat& u, const CMat& states);
CMat evolve_batch_serial(const CMat& u, const CMat& states);

double hermiticity_error(const CMat& m);
double unitarity_error(const CMat& u);

}  // namespace qelm
