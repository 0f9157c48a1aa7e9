#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace qelm {

using Vec  = Eigen::VectorXd;
using Mat  = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

using complex = std::complex<double>;

inline constexpr std::size_t dim_for_qubits(int n) { return std::size_t{1} << n; }

}  // namespace qelm
