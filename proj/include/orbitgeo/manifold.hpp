#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "orbitgeo/spectral.hpp"

namespace orbitgeo {

/// Positive invertible element of the unitized algebra (a point of the
/// manifold). The leaf is labeled by the scalar; the unit leaf has scalar 1.
class PositivePoint {
 public:
  explicit PositivePoint(const UnitizedOperator& value) : value_(check(value)), spec_(spectral(value_)) {
    if (!has_positive_spectrum(spec_.eigenvalues)) {
      throw DomainError("PositivePoint: realization is not positive definite");
    }
  }

  static PositivePoint unit(Eigen::Index n) { return PositivePoint(UnitizedOperator::unit(n)); }

  const UnitizedOperator& value() const { return value_; }
  const SpectralDecomposition& spectrum() const { return spec_; }
  Eigen::Index dim() const { return value_.dim(); }
  double leaf() const { return value_.scalar().real(); }

  /// p^t computed from the cached decomposition.
  UnitizedOperator power(double t) const {
    const double s = std::pow(leaf(), t);
    Matrix part = spec_.apply([t](double x) { return std::pow(x, t); });
    part.diagonal().array() -= s;
    return {Complex(s, 0.0), hermitize(part)};
  }

  UnitizedOperator inverse() const { return power(-1.0); }

  friend bool operator==(const PositivePoint& a, const PositivePoint& b) { return a.value_ == b.value_; }

 private:
  static UnitizedOperator check(const UnitizedOperator& v) {
    if (!v.is_hermitian(kStructuralTol)) throw NotHermitian("PositivePoint: value is not Hermitian");
    if (v.scalar().real() <= 0.0) throw DomainError("PositivePoint: scalar part must be positive");
    return v.hermitian_part();
  }

  UnitizedOperator value_;
  SpectralDecomposition spec_;
};

/// Hermitian pair attached to a base point.
class TangentVector {
 public:
  TangentVector(PositivePoint base, const UnitizedOperator& value) : base_(std::move(base)), value_(value) {
    require_same_dim(base_.dim(), value_.dim(), "TangentVector");
    if (!value_.is_hermitian(kStructuralTol)) throw NotHermitian("TangentVector: value is not Hermitian");
    value_ = value_.hermitian_part();
  }

  const PositivePoint& base() const { return base_; }
  const UnitizedOperator& value() const { return value_; }

 private:
  PositivePoint base_;
  UnitizedOperator value_;
};

namespace detail {

inline void require_base(const PositivePoint& p, const TangentVector& v, const char* what) {
  if (!(v.base() == p)) throw BaseMismatch(std::string(what) + ": tangent vector attached to another point");
}

inline UnitizedOperator sandwich(const UnitizedOperator& s, const UnitizedOperator& x) {
  return (s * x * s).hermitian_part();
}

}  // namespace detail

/// <X, Y>_p = <p^{-1} X, Y p^{-1}>_2 without base bookkeeping.
inline double metric_value(const PositivePoint& p, const UnitizedOperator& x, const UnitizedOperator& y) {
  const UnitizedOperator pinv = p.inverse();
  return inner2(pinv * x, y * pinv).real();
}

inline double metric_at(const PositivePoint& p, const TangentVector& x, const TangentVector& y) {
  detail::require_base(p, x, "metric_at");
  detail::require_base(p, y, "metric_at");
  return metric_value(p, x.value(), y.value());
}

inline double tangent_norm(const PositivePoint& p, const UnitizedOperator& x) {
  return std::sqrt(std::max(0.0, metric_value(p, x, x)));
}

/// p^{1/2} (p^{-1/2} q p^{-1/2})^t p^{1/2}
inline PositivePoint geodesic(const PositivePoint& p, const PositivePoint& q, double t) {
  require_same_dim(p.dim(), q.dim(), "geodesic");
  const UnitizedOperator root = p.power(0.5);
  const UnitizedOperator inv_root = p.power(-0.5);
  const UnitizedOperator middle = detail::sandwich(inv_root, q.value());
  return PositivePoint(detail::sandwich(root, uo_pow(middle, t)));
}

inline PositivePoint exp_map(const PositivePoint& p, const TangentVector& v) {
  detail::require_base(p, v, "exp_map");
  const UnitizedOperator root = p.power(0.5);
  const UnitizedOperator inv_root = p.power(-0.5);
  return PositivePoint(detail::sandwich(root, uo_exp(detail::sandwich(inv_root, v.value()))));
}

/// The two rearranged forms p e^{p^{-1}V} and e^{V p^{-1}} p, each evaluated
/// with a general (non-Hermitian) exponential.
inline std::pair<UnitizedOperator, UnitizedOperator> exp_map_alternates(const PositivePoint& p,
                                                                         const TangentVector& v) {
  detail::require_base(p, v, "exp_map_alternates");
  const UnitizedOperator pinv = p.inverse();
  return {p.value() * exp_general(pinv * v.value()), exp_general(v.value() * pinv) * p.value()};
}

/// p^{1/2} ln(p^{-1/2} q p^{-1/2}) p^{1/2}
inline TangentVector log_map(const PositivePoint& p, const PositivePoint& q) {
  require_same_dim(p.dim(), q.dim(), "log_map");
  const UnitizedOperator root = p.power(0.5);
  const UnitizedOperator inv_root = p.power(-0.5);
  return TangentVector(p, detail::sandwich(root, uo_log(detail::sandwich(inv_root, q.value()))));
}

inline double distance(const PositivePoint& p, const PositivePoint& q) {
  const TangentVector v = log_map(p, q);
  return tangent_norm(p, v.value());
}

/// R_p(X, Y) Z = -1/4 p [[p^{-1} X, p^{-1} Y], p^{-1} Z]
inline TangentVector curvature(const PositivePoint& p, const TangentVector& x, const TangentVector& y,
                               const TangentVector& z) {
  detail::require_base(p, x, "curvature");
  detail::require_base(p, y, "curvature");
  detail::require_base(p, z, "curvature");
  const UnitizedOperator pinv = p.inverse();
  const UnitizedOperator inner = commutator(commutator(pinv * x.value(), pinv * y.value()), pinv * z.value());
  return TangentVector(p, (-0.25 * (p.value() * inner)).hermitian_part());
}

inline double sectional(const PositivePoint& p, const TangentVector& x, const TangentVector& y) {
  const double xx = metric_at(p, x, x);
  const double yy = metric_at(p, y, y);
  const double xy = metric_at(p, x, y);
  const double gram = xx * yy - xy * xy;
  if (!(xx > 0.0 && yy > 0.0) || gram <= 1e-10 * xx * yy) {
    throw DegeneratePlane("sectional: tangent vectors are linearly dependent");
  }
  return metric_at(p, curvature(p, x, y, y), x) / gram;
}

/// A curve sampled through an evaluator on [0, 1]; derivatives by central
/// differences with the given step.
struct SampledCurve {
  std::function<PositivePoint(double)> evaluator;
  double step = 1e-4;

  PositivePoint at(double t) const { return evaluator(t); }

  void require_interior(double t) const {
    if (!(t > step && t < 1.0 - step)) {
      throw OutOfRange("SampledCurve: t must lie in (h, 1 - h) for central differences");
    }
  }

  UnitizedOperator velocity(double t) const {
    return (1.0 / (2.0 * step)) * (at(t + step).value() - at(t - step).value());
  }

  UnitizedOperator acceleration(double t) const {
    return (1.0 / (step * step)) * (at(t + step).value() - 2.0 * at(t).value() + at(t - step).value());
  }

  /// First derivative usable on the closed interval: one-sided second-order
  /// stencils at the ends.
  UnitizedOperator velocity_closed(double t) const {
    const double h = step;
    if (t - h < 0.0) {
      return (1.0 / (2.0 * h)) * (-3.0 * at(t).value() + 4.0 * at(t + h).value() - at(t + 2 * h).value());
    }
    if (t + h > 1.0) {
      return (1.0 / (2.0 * h)) * (3.0 * at(t).value() - 4.0 * at(t - h).value() + at(t - 2 * h).value());
    }
    return velocity(t);
  }
};

using VectorField = std::function<TangentVector(double)>;

/// V' - 1/2 (g' g^{-1} V + V g^{-1} g') along the curve.
inline TangentVector covariant_derivative(const SampledCurve& curve, const VectorField& field, double t) {
  curve.require_interior(t);
  const PositivePoint g = curve.at(t);
  const TangentVector v = field(t);
  detail::require_base(g, v, "covariant_derivative");
  const double h = curve.step;
  const UnitizedOperator v_dot = (1.0 / (2.0 * h)) * (field(t + h).value() - field(t - h).value());
  const UnitizedOperator g_dot = curve.velocity(t);
  const UnitizedOperator ginv = g.inverse();
  const UnitizedOperator correction = g_dot * ginv * v.value() + v.value() * ginv * g_dot;
  return TangentVector(g, (v_dot - 0.5 * correction).hermitian_part());
}

/// |g'' - g' g^{-1} g'|_2
inline double geodesic_residual(const SampledCurve& curve, double t) {
  curve.require_interior(t);
  const UnitizedOperator vel = curve.velocity(t);
  const UnitizedOperator acc = curve.acceleration(t);
  return norm2(acc - vel * curve.at(t).inverse() * vel);
}

/// Composite Simpson rule for the length, `nodes` odd.
inline double curve_length(const SampledCurve& curve, int nodes = 129) {
  if (nodes < 3 || nodes % 2 == 0) throw OutOfRange("curve_length: node count must be odd and >= 3");
  const double dt = 1.0 / (nodes - 1);
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double t = i * dt;
    const double speed = tangent_norm(curve.at(t), curve.velocity_closed(t));
    const double w = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * speed;
  }
  return sum * dt / 3.0;
}

inline bool is_invertible(const UnitizedOperator& g) {
  if (std::abs(g.scalar()) <= kPositivityRatio) return false;
  Eigen::JacobiSVD<Matrix> svd(g.realize());
  const RealVector& s = svd.singularValues();
  return s(s.size() - 1) > kPositivityRatio * std::max(1.0, s(0));
}

/// I_g(p) = g p g*
inline PositivePoint isometry_action(const UnitizedOperator& g, const PositivePoint& p) {
  require_same_dim(g.dim(), p.dim(), "isometry_action");
  if (!is_invertible(g)) throw SingularOperator("isometry_action: g is not invertible");
  return PositivePoint((g * p.value() * g.adjoint()).hermitian_part());
}

struct InequalityCheck {
  double lhs;
  double rhs;
  bool holds(double slack = 1e-10) const { return lhs <= rhs + slack; }
};

/// |X - Y|_2 against |ln(e^{-X/2} e^Y e^{-X/2})|_2.
inline InequalityCheck emi_check(const UnitizedOperator& x, const UnitizedOperator& y) {
  require_same_dim(x.dim(), y.dim(), "emi_check");
  const UnitizedOperator half = uo_exp(-0.5 * x.hermitian_part());
  const UnitizedOperator middle = detail::sandwich(half, uo_exp(y));
  return {norm2(x - y), norm2(uo_log(middle))};
}

/// |e^{x+y}|_op against |e^{x/2} e^y e^{x/2}|_op on the realizations.
inline InequalityCheck segal_check(const UnitizedOperator& x, const UnitizedOperator& y) {
  require_same_dim(x.dim(), y.dim(), "segal_check");
  if (!x.is_hermitian(kStructuralTol) || !y.is_hermitian(kStructuralTol)) {
    throw NotHermitian("segal_check: inputs must be Hermitian");
  }
  const Matrix xr = x.hermitian_part().realize();
  const Matrix yr = y.hermitian_part().realize();
  const double lhs = std::exp(spectral(Matrix(xr + yr)).eigenvalues.maxCoeff());
  const Matrix half = hermitian_exp(0.5 * xr);
  const double rhs = spectral(Matrix(half * hermitian_exp(yr) * half)).eigenvalues.maxCoeff();
  return {lhs, rhs};
}

}  // namespace orbitgeo
