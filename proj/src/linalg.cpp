#include "gabor/linalg.hpp"

#include <cmath>

namespace gabor {

namespace {

Eigen::MatrixXcd symmetrize(const Eigen::MatrixXcd& s) {
  if (s.rows() != s.cols()) {
    throw ValidationError("linalg: matrix must be square");
  }
  return 0.5 * (s + s.adjoint());
}

double power_top(const Eigen::MatrixXcd& y) {
  const Eigen::Index n = y.rows();
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  // Deterministic symmetry-breaking perturbation.
  for (Eigen::Index i = 0; i < n; ++i) v(i) += Complex(0.0, double(i % 7) * 1e-3);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXcd next = y * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double estimate = std::real(Complex(next.adjoint() * (y * next)));
    if (it > 2 && std::abs(estimate - lambda) <= 1e-8 * std::max(1.0, std::abs(estimate))) {
      return estimate;
    }
    lambda = estimate;
    v.swap(next);
  }
  return lambda;
}

double inverse_bottom(const Eigen::MatrixXcd& y, double top) {
  const Eigen::Index n = y.rows();
  // Shift keeps the factorization definite when the bottom eigenvalue is ~0.
  const double shift = -1e-10 * std::max(1.0, std::abs(top));
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(
      y - shift * Eigen::MatrixXcd::Identity(n, n));
  if (ldlt.info() != Eigen::Success) {
    throw NumericError("linalg: inverse iteration factorization failed");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) += Complex(0.0, double(i % 5) * 1e-3);
  v.normalize();
  double lambda = top;
  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXcd next = ldlt.solve(v);
    const double norm = next.norm();
    if (norm == 0.0) break;
    next /= norm;
    const double estimate = std::real(Complex(next.adjoint() * (y * next)));
    if (it > 2 && std::abs(estimate - lambda) <= 1e-8 * std::max(1.0, std::abs(estimate))) {
      return estimate;
    }
    lambda = estimate;
    v.swap(next);
  }
  return lambda;
}

EigenExtremes iterative_extremes(const Eigen::MatrixXcd& y) {
  EigenExtremes out;
  out.max_eig = power_top(y);
  out.min_eig = inverse_bottom(y, out.max_eig);
  return out;
}

}  // namespace

EigenExtremes hermitian_extremes(const Eigen::MatrixXcd& s) {
  const Eigen::MatrixXcd h = symmetrize(s);
  if (h.rows() <= kDenseEigenLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericError("linalg.hermitian_extremes: eigensolver failed");
    }
    return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
  }
  return iterative_extremes(h);
}

EigenExtremes pencil_extremes(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd hs = symmetrize(s);
  const Eigen::MatrixXcd hm = symmetrize(m);
  if (hs.rows() != hm.rows()) {
    throw ValidationError("linalg.pencil_extremes: dimension mismatch");
  }
  if (hs.rows() <= kDenseEigenLimit) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        hs, hm, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) {
      throw NumericError(
          "linalg.pencil_extremes: eigensolver failed (mass matrix not positive "
          "definite?)");
    }
    return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
  }
  // Whiten with the Cholesky factor of M and fall back to iteration.
  Eigen::LLT<Eigen::MatrixXcd> llt(hm);
  if (llt.info() != Eigen::Success) {
    throw NumericError("linalg.pencil_extremes: mass matrix not positive definite");
  }
  const Eigen::MatrixXcd l = llt.matrixL();
  Eigen::MatrixXcd y = l.triangularView<Eigen::Lower>().solve(hs);
  y = l.triangularView<Eigen::Lower>().solve(y.adjoint().eval()).adjoint();
  return iterative_extremes(symmetrize(y));
}

}  // namespace gabor
