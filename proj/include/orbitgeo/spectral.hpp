#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "orbitgeo/unitized.hpp"

namespace orbitgeo {

/// Eigen-decomposition of a Hermitian realization: eigenvalues ascending,
/// columns of basis orthonormal.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix basis;

  Eigen::Index dim() const { return eigenvalues.size(); }

  /// basis diag(f(eigenvalues)) basis*
  template <class F>
  Matrix apply(F&& f) const {
    Eigen::VectorXcd d(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) d(i) = Complex(f(eigenvalues(i)));
    return basis * d.asDiagonal() * basis.adjoint();
  }

  Matrix reconstruct() const {
    return apply([](double x) { return x; });
  }

  /// Index ranges [first, last) of eigenvalue clusters within tol (relative).
  std::vector<std::pair<Eigen::Index, Eigen::Index>> degenerate_blocks(double tol = 1e-10) const {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;
    if (dim() == 0) return blocks;
    const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= dim(); ++i) {
      if (i == dim() || eigenvalues(i) - eigenvalues(i - 1) > tol * scale) {
        blocks.emplace_back(start, i);
        start = i;
      }
    }
    return blocks;
  }
};

namespace detail {

// Modified Gram-Schmidt on columns [first, last); keeps solver order and phases.
inline void orthonormalize_columns(Matrix& q, Eigen::Index first, Eigen::Index last) {
  for (Eigen::Index j = first; j < last; ++j) {
    for (Eigen::Index k = first; k < j; ++k) {
      q.col(j) -= (q.col(k).dot(q.col(j))) * q.col(k);
    }
    q.col(j).normalize();
  }
}

inline SpectralDecomposition decompose_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(h));
  if (solver.info() != Eigen::Success) throw Error("eigen-decomposition did not converge");
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (auto [first, last] : out.degenerate_blocks()) {
    if (last - first > 1) orthonormalize_columns(out.basis, first, last);
  }
  return out;
}

}  // namespace detail

/// Spectral decomposition of a Hermitian matrix (no structural check).
inline SpectralDecomposition spectral(const Matrix& h) { return detail::decompose_hermitian(h); }

/// Spectral decomposition of the realization lambda + a of a Hermitian pair.
inline SpectralDecomposition spectral(const UnitizedOperator& x) {
  if (!x.is_hermitian(kStructuralTol)) throw NotHermitian("spectral: operator is not Hermitian");
  return detail::decompose_hermitian(x.realize());
}

/// The scalar functions available to the functional calculus.
struct ScalarFunction {
  enum class Kind { kExp, kLog, kSqrt, kPow, kInv };
  Kind kind;
  double exponent = 1.0;

  static ScalarFunction exp() { return {Kind::kExp}; }
  static ScalarFunction log() { return {Kind::kLog}; }
  static ScalarFunction sqrt() { return {Kind::kSqrt}; }
  static ScalarFunction pow(double t) { return {Kind::kPow, t}; }
  static ScalarFunction inv() { return {Kind::kInv}; }

  bool needs_positive() const { return kind != Kind::kExp; }

  double operator()(double x) const {
    switch (kind) {
      case Kind::kExp: return std::exp(x);
      case Kind::kLog: return std::log(x);
      case Kind::kSqrt: return std::sqrt(x);
      case Kind::kPow: return std::pow(x, exponent);
      case Kind::kInv: return 1.0 / x;
    }
    return 0.0;
  }
};

/// min eigenvalue > 1e-12 * max(1, max eigenvalue)
inline bool has_positive_spectrum(const RealVector& eigenvalues) {
  const double top = eigenvalues.maxCoeff();
  return eigenvalues.minCoeff() > kPositivityRatio * std::max(1.0, top);
}

/**
 * f(x) in the pair algebra: the scalar becomes f(lambda) and the part becomes
 * f(lambda + a) - f(lambda). Log, sqrt, pow and inv require lambda > 0 and a
 * positive realization.
 */
inline UnitizedOperator matrix_function(const UnitizedOperator& x, ScalarFunction f) {
  if (!x.is_hermitian(kStructuralTol)) throw NotHermitian("matrix_function: operator is not Hermitian");
  const double lambda = x.scalar().real();
  const SpectralDecomposition sd = detail::decompose_hermitian(x.realize());
  if (f.needs_positive() && (lambda <= 0.0 || !has_positive_spectrum(sd.eigenvalues))) {
    throw DomainError("matrix_function: spectrum is not positive");
  }
  const double f_lambda = f(lambda);
  Matrix part = sd.apply(f);
  part.diagonal().array() -= f_lambda;
  return {Complex(f_lambda, 0.0), hermitize(part)};
}

inline UnitizedOperator uo_exp(const UnitizedOperator& x) { return matrix_function(x, ScalarFunction::exp()); }
inline UnitizedOperator uo_log(const UnitizedOperator& x) { return matrix_function(x, ScalarFunction::log()); }
inline UnitizedOperator uo_sqrt(const UnitizedOperator& x) { return matrix_function(x, ScalarFunction::sqrt()); }
inline UnitizedOperator uo_pow(const UnitizedOperator& x, double t) {
  return matrix_function(x, ScalarFunction::pow(t));
}
inline UnitizedOperator uo_inv(const UnitizedOperator& x) { return matrix_function(x, ScalarFunction::inv()); }

/// Exponential of an arbitrary (not necessarily Hermitian) pair by Pade
/// scaling-and-squaring on the realization. Independent of the spectral path.
inline UnitizedOperator exp_general(const UnitizedOperator& x) {
  const Complex e = std::exp(x.scalar());
  Matrix part = x.realize().exp();
  part.diagonal().array() -= e;
  return {e, std::move(part)};
}

/// e^{ih} for Hermitian h.
inline Matrix unitary_exp(const Matrix& h) {
  return spectral(h).apply([](double x) { return std::exp(Complex(0.0, x)); });
}

/// e^{h} for Hermitian h.
inline Matrix hermitian_exp(const Matrix& h) {
  return hermitize(spectral(h).apply([](double x) { return std::exp(x); }));
}

/// Largest singular value.
inline double operator_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace orbitgeo
