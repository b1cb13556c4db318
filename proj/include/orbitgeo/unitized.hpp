#pragma once

#include <cmath>

#include "orbitgeo/core.hpp"

namespace orbitgeo {

/**
 * Element lambda + a of the unitized Hilbert-Schmidt algebra at matrix scale.
 *
 * The scalar and the trace part are stored separately. In finite dimension
 * lambda*I + a does not determine the pair, and the inner product weighs the
 * two components differently, so the pair is the primary representation and
 * realize() is only a view of it.
 */
class UnitizedOperator {
 public:
  UnitizedOperator(Complex scalar, Matrix part) : scalar_(scalar), part_(std::move(part)) {
    if (part_.rows() < 1 || part_.rows() != part_.cols()) {
      throw DimensionMismatch("UnitizedOperator: part must be a non-empty square matrix");
    }
  }

  static UnitizedOperator zero(Eigen::Index n) { return {0.0, Matrix::Zero(n, n)}; }
  static UnitizedOperator unit(Eigen::Index n) { return {1.0, Matrix::Zero(n, n)}; }
  static UnitizedOperator scalar_only(Eigen::Index n, Complex s) { return {s, Matrix::Zero(n, n)}; }
  static UnitizedOperator pure(Matrix a) { return {0.0, std::move(a)}; }

  Eigen::Index dim() const { return part_.rows(); }
  Complex scalar() const { return scalar_; }
  const Matrix& part() const { return part_; }

  Matrix realize() const { return scalar_ * identity(dim()) + part_; }

  UnitizedOperator adjoint() const { return {std::conj(scalar_), part_.adjoint()}; }

  /// Exact structural check when tol == 0.
  bool is_hermitian(double tol = 0.0) const {
    const double scale = std::max({1.0, std::abs(scalar_), part_.cwiseAbs().maxCoeff()});
    return std::abs(scalar_.imag()) <= tol * scale &&
           (part_ - part_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
  }

  /// Projection onto the real (self-adjoint) subspace H_R.
  UnitizedOperator hermitian_part() const {
    return {Complex(scalar_.real(), 0.0), orbitgeo::hermitize(part_)};
  }

  friend bool operator==(const UnitizedOperator& x, const UnitizedOperator& y) {
    return x.dim() == y.dim() && x.scalar_ == y.scalar_ && x.part_ == y.part_;
  }

 private:
  Complex scalar_;
  Matrix part_;
};

inline UnitizedOperator operator+(const UnitizedOperator& x, const UnitizedOperator& y) {
  require_same_dim(x.dim(), y.dim(), "uo_add");
  return {x.scalar() + y.scalar(), x.part() + y.part()};
}

inline UnitizedOperator operator-(const UnitizedOperator& x, const UnitizedOperator& y) {
  require_same_dim(x.dim(), y.dim(), "uo_sub");
  return {x.scalar() - y.scalar(), x.part() - y.part()};
}

inline UnitizedOperator operator-(const UnitizedOperator& x) { return {-x.scalar(), -x.part()}; }

inline UnitizedOperator operator*(Complex c, const UnitizedOperator& x) {
  return {c * x.scalar(), c * x.part()};
}

inline UnitizedOperator operator*(double c, const UnitizedOperator& x) {
  return {c * x.scalar(), c * x.part()};
}

// (lambda + a)(mu + b) = lambda mu + (lambda b + mu a + ab)
inline UnitizedOperator operator*(const UnitizedOperator& x, const UnitizedOperator& y) {
  require_same_dim(x.dim(), y.dim(), "uo_mul");
  Matrix part = x.scalar() * y.part() + y.scalar() * x.part() + x.part() * y.part();
  return {x.scalar() * y.scalar(), std::move(part)};
}

inline UnitizedOperator uo_add(const UnitizedOperator& x, const UnitizedOperator& y) { return x + y; }
inline UnitizedOperator uo_mul(const UnitizedOperator& x, const UnitizedOperator& y) { return x * y; }

/// [x, y]; the scalar terms cancel identically, so only the parts are used.
inline UnitizedOperator commutator(const UnitizedOperator& x, const UnitizedOperator& y) {
  require_same_dim(x.dim(), y.dim(), "commutator");
  return UnitizedOperator::pure(x.part() * y.part() - y.part() * x.part());
}

/// <alpha + a, beta + b>_2 = alpha conj(beta) + 4 tr(b* a)
inline Complex inner2(const UnitizedOperator& x, const UnitizedOperator& y) {
  require_same_dim(x.dim(), y.dim(), "inner2");
  return x.scalar() * std::conj(y.scalar()) + 4.0 * (y.part().adjoint() * x.part()).trace();
}

inline double norm2(const UnitizedOperator& x) {
  return std::sqrt(std::norm(x.scalar()) + 4.0 * x.part().squaredNorm());
}

/// Relative distance between two pairs, scale max(1, |x|_2, |y|_2).
inline double relative_gap(const UnitizedOperator& x, const UnitizedOperator& y) {
  return norm2(x - y) / relative_scale(norm2(x), norm2(y));
}

}  // namespace orbitgeo
