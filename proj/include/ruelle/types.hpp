#pragma once

#include <complex>

#include <Eigen/Core>

namespace ruelle {

using Complex = std::complex<double>;

/// Largest ambient dimension supported by map evaluation. Points and
/// Jacobians use fixed-capacity storage so hot loops never allocate.
inline constexpr int kMaxDim = 4;

using Point = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Jacobian = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline Point point1(Complex z) {
  Point p(1);
  p(0) = z;
  return p;
}

}  // namespace ruelle
