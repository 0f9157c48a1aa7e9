#pragma once

#include <cstdint>

#include "qelm/types.hpp"

namespace qelm {

// Computational-basis outcome probabilities, p_k = |psi_k|^2. Inputs within
// 1e-10 of unit norm are renormalized, anything further off is rejected.
Vec measure_exact(const CVec& psi);

// Empirical frequencies of `shots` multinomial draws from the exact
// distribution; counts/shots sums to one by construction.
Vec measure_shots(const CVec& psi, long shots, std::uint64_t seed);

// Readout feature matrix (samples x 2^N) for column states. OpenMP
// production path plus the serial reference.
Mat measure_batch(const CMat& states);
Mat measure_batch_serial(const CMat& states);

}  // namespace qelm
