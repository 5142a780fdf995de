#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qgraph {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace qgraph
