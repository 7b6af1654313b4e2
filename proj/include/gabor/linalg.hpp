#pragma once

#include <Eigen/Dense>

#include "gabor/common.hpp"

namespace gabor {

/// Threshold above which dense eigensolvers give way to iterative extremes.
inline constexpr int kDenseEigenLimit = 2000;

struct EigenExtremes {
  double min_eig = 0.0;
  double max_eig = 0.0;
};

/// Extreme eigenvalues of a Hermitian matrix (symmetrized internally).
/// Dense solve up to kDenseEigenLimit; beyond that, power iteration for the
/// top and shifted inverse iteration for the bottom, tolerance 1e-8.
EigenExtremes hermitian_extremes(const Eigen::MatrixXcd& s);

/// Extreme eigenvalues of the Hermitian pencil S x = λ M x with M positive
/// definite: the extremes of x^H S x / x^H M x.
EigenExtremes pencil_extremes(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& m);

}  // namespace gabor
