#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "orbitgeo/orbit.hpp"

namespace orbitgeo::sampling {

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

/// Symmetrized complex Gaussian, scaled to unit 2-norm.
inline Matrix hermitian(Rng& rng, Eigen::Index n) {
  const Matrix h = hermitize(gaussian_matrix(rng, n, n));
  return h / hs_norm(h);
}

/// Hermitian pair of unit 2-norm; the scalar is zero when `with_scalar` is false.
inline UnitizedOperator hermitian_pair(Rng& rng, Eigen::Index n, bool with_scalar = true) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = with_scalar ? normal(rng) : 0.0;
  const UnitizedOperator x(s, hermitize(gaussian_matrix(rng, n, n)));
  return (1.0 / norm2(x)) * x;
}

/// exp of a random Hermitian pair; lies on the unit leaf when `unit_leaf`.
inline PositivePoint positive(Rng& rng, Eigen::Index n, bool unit_leaf = false) {
  return PositivePoint(uo_exp(hermitian_pair(rng, n, !unit_leaf)));
}

/// QR of a complex Gaussian with the diagonal of R made positive.
inline Matrix unitary(Rng& rng, Eigen::Index n) {
  const Matrix z = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * identity(n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Invertible pair with singular values of the realization in [1/2, 2] and a
/// complex scalar of modulus in [1/2, 2].
inline UnitizedOperator invertible(Rng& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  RealVector sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) sigma(i) = mag(rng);
  const Matrix real = unitary(rng, n) * sigma.cast<Complex>().asDiagonal() * unitary(rng, n);
  const Complex scalar = std::polar(mag(rng), phase(rng));
  Matrix part = real;
  part.diagonal().array() -= scalar;
  return {scalar, part};
}

inline Matrix projector(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  const Matrix u = unitary(rng, n).leftCols(rank);
  return hermitize(u * u.adjoint());
}

inline Eigen::Index uniform_index(Rng& rng, Eigen::Index lo, Eigen::Index hi) {
  return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

/// Hermitian with `distinct` eigenvalues, gaps >= 1/2, random multiplicities
/// and a random eigenbasis.
inline FiniteSpectrumHermitian finite_spectrum(Rng& rng, Eigen::Index n, Eigen::Index distinct) {
  distinct = std::clamp<Eigen::Index>(distinct, 1, n);
  std::uniform_real_distribution<double> step(0.5, 1.5);
  std::vector<double> values{std::uniform_real_distribution<double>(-1.0, 1.0)(rng)};
  for (Eigen::Index i = 1; i < distinct; ++i) values.push_back(values.back() + step(rng));

  std::vector<Eigen::Index> mult(distinct, 1);
  for (Eigen::Index extra = n - distinct; extra > 0; --extra) ++mult[uniform_index(rng, 0, distinct - 1)];

  const Matrix u = unitary(rng, n);
  std::vector<Matrix> bases;
  Eigen::Index at = 0;
  for (Eigen::Index m : mult) {
    bases.push_back(u.middleCols(at, m));
    at += m;
  }
  return {std::move(values), std::move(bases)};
}

/// Projector base a = ln(2) A of the given rank presented in a random basis.
inline FiniteSpectrumHermitian projector_base(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  return FiniteSpectrumHermitian::from_projector(projector(rng, n, rank));
}

/// Co-diagonal Hermitian of unit 2-norm w.r.t. the projector.
inline Matrix codiagonal(Rng& rng, const Matrix& proj) {
  const Matrix h = hermitize(codiag_part(proj, hermitian(rng, proj.rows())));
  return h / hs_norm(h);
}

/// Hermitian commuting with `a`: a random Hermitian compressed to each
/// eigenspace.
inline Matrix commuting_hermitian(Rng& rng, const FiniteSpectrumHermitian& a) {
  const Matrix h = hermitian(rng, a.dim());
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.count(); ++i) {
    const Matrix p = a.projection(i);
    out += p * h * p;
  }
  return hermitize(out);
}

}  // namespace orbitgeo::sampling
