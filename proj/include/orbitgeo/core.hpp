#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace orbitgeo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Tolerances shared by every module. Relative checks use max(1, |a|, |b|)
// as the scale, so the floor is absolute near zero.
inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kPositivityRatio = 1e-12;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kIdempotentTol = 1e-12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
// Log, sqrt, fractional power or inverse asked of a non-positive operator.
struct DomainError : Error {
  using Error::Error;
};
struct BaseMismatch : Error {
  using Error::Error;
};
struct SingularOperator : Error {
  using Error::Error;
};
struct DegeneratePlane : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
struct NotUnitary : Error {
  using Error::Error;
};
struct NotProjector : Error {
  using Error::Error;
};
struct NeighborhoodError : Error {
  using Error::Error;
};
struct OffOrbit : Error {
  using Error::Error;
};
struct RankMismatch : OffOrbit {
  using OffOrbit::OffOrbit;
};
struct NotTangent : Error {
  using Error::Error;
};
struct NotCodiagonal : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

/// Hilbert-Schmidt norm with the factor 2 used throughout: 2 tr(a*a)^{1/2}.
inline double hs_norm(const Matrix& a) { return 2.0 * a.norm(); }

inline double relative_scale(double a, double b) { return std::max({1.0, a, b}); }

/// |a - b|_F / max(1, |a|_F, |b|_F).
inline double relative_gap(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / relative_scale(a.norm(), b.norm());
}

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline bool is_hermitian(const Matrix& a, double tol = kStructuralTol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

inline bool is_unitary(const Matrix& u, double tol = kUnitaryTol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - identity(u.rows())).norm() <= tol * std::max<double>(1.0, u.rows());
}

inline bool is_projector(const Matrix& a, double tol = kIdempotentTol) {
  return is_hermitian(a, tol) && (a * a - a).norm() <= tol * std::max(1.0, a.norm());
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

}  // namespace orbitgeo
