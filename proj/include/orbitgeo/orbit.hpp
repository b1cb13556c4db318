#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "orbitgeo/manifold.hpp"

namespace orbitgeo {

/// Hermitian matrix with finitely many distinct eigenvalues, stored as its
/// spectral resolution a = sum_i lambda_i P_i.
class FiniteSpectrumHermitian {
 public:
  /// `bases[i]` holds orthonormal columns spanning the eigenspace of
  /// `eigenvalues[i]`; together they must form a unitary.
  FiniteSpectrumHermitian(std::vector<double> eigenvalues, std::vector<Matrix> bases)
      : eigenvalues_(std::move(eigenvalues)), bases_(std::move(bases)) {
    if (eigenvalues_.empty() || eigenvalues_.size() != bases_.size()) {
      throw DimensionMismatch("FiniteSpectrumHermitian: one basis per eigenvalue required");
    }
    const Eigen::Index n = bases_.front().rows();
    Eigen::Index cols = 0;
    for (std::size_t i = 0; i < bases_.size(); ++i) {
      require_same_dim(bases_[i].rows(), n, "FiniteSpectrumHermitian");
      if (bases_[i].cols() < 1) throw DimensionMismatch("FiniteSpectrumHermitian: empty eigenspace");
      if (i > 0 && !(eigenvalues_[i] > eigenvalues_[i - 1])) {
        throw Error("FiniteSpectrumHermitian: eigenvalues must be strictly increasing");
      }
      cols += bases_[i].cols();
    }
    require_same_dim(cols, n, "FiniteSpectrumHermitian");
    Matrix full(n, n);
    Eigen::Index at = 0;
    for (const Matrix& b : bases_) {
      full.middleCols(at, b.cols()) = b;
      at += b.cols();
    }
    if (!is_unitary(full)) throw NotUnitary("FiniteSpectrumHermitian: eigenspace bases are not orthonormal");
    matrix_ = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < bases_.size(); ++i) matrix_ += eigenvalues_[i] * projection(i);
    matrix_ = hermitize(matrix_);
  }

  /// Groups eigenvalues closer than cluster_tol * max(1, |a|_max).
  static FiniteSpectrumHermitian from_matrix(const Matrix& a, double cluster_tol = 1e-8) {
    if (!is_hermitian(a)) throw NotHermitian("FiniteSpectrumHermitian: matrix is not Hermitian");
    const SpectralDecomposition sd = spectral(a);
    const double scale = std::max(1.0, sd.eigenvalues.cwiseAbs().maxCoeff());
    std::vector<double> values;
    std::vector<Matrix> bases;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= sd.dim(); ++i) {
      if (i == sd.dim() || sd.eigenvalues(i) - sd.eigenvalues(i - 1) > cluster_tol * scale) {
        values.push_back(sd.eigenvalues.segment(start, i - start).mean());
        bases.push_back(sd.basis.middleCols(start, i - start));
        start = i;
      }
    }
    return {std::move(values), std::move(bases)};
  }

  /// The base a = ln(2) A, so that e^a = 1 + A for an orthogonal projector A.
  static FiniteSpectrumHermitian from_projector(const Matrix& projector) {
    if (!is_projector(projector)) throw NotProjector("from_projector: matrix is not an orthogonal projector");
    const SpectralDecomposition sd = spectral(projector);
    const Eigen::Index n = sd.dim();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < n; ++i) rank += sd.eigenvalues(i) > 0.5 ? 1 : 0;
    std::vector<double> values;
    std::vector<Matrix> bases;
    if (rank < n) {
      values.push_back(0.0);
      bases.push_back(sd.basis.leftCols(n - rank));
    }
    if (rank > 0) {
      values.push_back(std::numbers::ln2);
      bases.push_back(sd.basis.rightCols(rank));
    }
    return {std::move(values), std::move(bases)};
  }

  Eigen::Index dim() const { return matrix_.rows(); }
  std::size_t count() const { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const Matrix& basis(std::size_t i) const { return bases_[i]; }
  Eigen::Index multiplicity(std::size_t i) const { return bases_[i].cols(); }
  Matrix projection(std::size_t i) const { return bases_[i] * bases_[i].adjoint(); }
  const Matrix& matrix() const { return matrix_; }

  /// Eigenvalues repeated by multiplicity, ascending.
  RealVector spectrum() const {
    RealVector out(dim());
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < count(); ++i) {
      out.segment(at, multiplicity(i)).setConstant(eigenvalues_[i]);
      at += multiplicity(i);
    }
    return out;
  }

  double min_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < count(); ++i) gap = std::min(gap, eigenvalues_[i] - eigenvalues_[i - 1]);
    return gap;
  }

  /// delta(a) = min gap / 4 in the 2-norm; infinite for a scalar matrix.
  double neighborhood_radius() const { return 0.25 * min_gap(); }

  /// sum_i f(lambda_i) P_i
  template <class F>
  Matrix apply(F&& f) const {
    Matrix out = Matrix::Zero(dim(), dim());
    for (std::size_t i = 0; i < count(); ++i) out += Complex(f(eigenvalues_[i])) * projection(i);
    return out;
  }

  Matrix exp_matrix() const {
    return hermitize(apply([](double x) { return std::exp(x); }));
  }

  /// True when e^a - 1 is an orthogonal projector, i.e. spectrum in {0, ln 2}.
  bool is_projector_base(double tol = kStructuralTol) const {
    return std::all_of(eigenvalues_.begin(), eigenvalues_.end(), [tol](double v) {
      return std::abs(v) <= tol || std::abs(v - std::numbers::ln2) <= tol;
    });
  }

  /// Index of the eigenvalue ln 2, or count() when absent.
  std::size_t projector_index() const {
    for (std::size_t i = 0; i < count(); ++i) {
      if (std::abs(eigenvalues_[i] - std::numbers::ln2) <= kStructuralTol) return i;
    }
    return count();
  }

  /// e^a - 1 for a projector base.
  Matrix projector() const {
    const std::size_t i = projector_index();
    return i == count() ? Matrix::Zero(dim(), dim()) : projection(i);
  }

 private:
  std::vector<double> eigenvalues_;
  std::vector<Matrix> bases_;
  Matrix matrix_;
};

/// Point g e^a g* of the unitary orbit, kept together with its presentation.
class OrbitPoint {
 public:
  OrbitPoint(FiniteSpectrumHermitian base, Matrix g)
      : base_(std::move(base)), g_(std::move(g)), point_(presented_point(base_, g_)) {}

  const FiniteSpectrumHermitian& base() const { return base_; }
  const Matrix& g() const { return g_; }
  const PositivePoint& point() const { return point_; }
  Matrix realization() const { return point_.value().realize(); }
  Eigen::Index dim() const { return base_.dim(); }

  /// g P_i g*, the eigenprojection of the point for e^{lambda_i}.
  Matrix projection(std::size_t i) const {
    const Matrix b = g_ * base_.basis(i);
    return b * b.adjoint();
  }

 private:
  static PositivePoint presented_point(const FiniteSpectrumHermitian& base, const Matrix& g) {
    require_same_dim(g.rows(), base.dim(), "OrbitPoint");
    if (!is_unitary(g)) throw NotUnitary("OrbitPoint: g is not unitary");
    Matrix part = Matrix::Zero(base.dim(), base.dim());
    for (std::size_t i = 0; i < base.count(); ++i) {
      const Matrix b = g * base.basis(i);
      part += (std::exp(base.eigenvalues()[i]) - 1.0) * (b * b.adjoint());
    }
    return PositivePoint(UnitizedOperator(1.0, hermitize(part)));
  }

  FiniteSpectrumHermitian base_;
  Matrix g_;
  PositivePoint point_;
};

/// Largest deviation between the sorted spectrum of `m` and `expected`.
inline double spectrum_drift(const Matrix& m, const RealVector& expected) {
  require_same_dim(m.rows(), expected.size(), "spectrum_drift");
  RealVector sorted = expected;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  return (spectral(m).eigenvalues - sorted).cwiseAbs().maxCoeff();
}

/// Drift of the realization spectrum from exp(spectrum(a)).
inline double spectrum_drift(const OrbitPoint& p) {
  return spectrum_drift(p.realization(), p.base().spectrum().array().exp().matrix());
}

/// pi_a(u) = u a u*
inline Matrix orbit_action(const Matrix& u, const Matrix& a) {
  require_same_dim(u.rows(), a.rows(), "orbit_action");
  if (!is_unitary(u)) throw NotUnitary("orbit_action: u is not unitary");
  if (!is_hermitian(a)) throw NotHermitian("orbit_action: a is not Hermitian");
  return hermitize(u * a * u.adjoint());
}

enum class SectionMode {
  kNeighborhood,  // any Hermitian x in the delta(a)-ball
  kOnOrbit,       // additionally require spectrum(x) == spectrum(a)
};

/**
 * Local cross-section phi_a near a. Spectral projections Q_i of x are matched
 * to the projections P_i of a and
 *
 *   phi_a(x) = sum_i Q_i P_i [1 - (P_i - Q_i)^2]^{-1/2},
 *
 * a unitary carrying each range of P_i onto the range of Q_i. phi_a(a) = 1.
 */
inline Matrix cross_section(const FiniteSpectrumHermitian& a, const Matrix& x,
                            SectionMode mode = SectionMode::kNeighborhood) {
  require_same_dim(a.dim(), x.rows(), "cross_section");
  if (!is_hermitian(x)) throw NotHermitian("cross_section: x is not Hermitian");
  const Eigen::Index n = a.dim();
  if (x == a.matrix()) return identity(n);
  const double offset = hs_norm(x - a.matrix());
  if (!(offset < a.neighborhood_radius())) {
    throw NeighborhoodError("cross_section: x lies outside the delta(a) neighborhood");
  }

  const SpectralDecomposition sd = spectral(x);
  const auto& values = a.eigenvalues();
  std::vector<Matrix> q(a.count(), Matrix::Zero(n, n));
  std::vector<Eigen::Index> hits(a.count(), 0);
  double mismatch = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mu = sd.eigenvalues(k);
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (std::abs(mu - values[i]) < std::abs(mu - values[nearest])) nearest = i;
    }
    mismatch = std::max(mismatch, std::abs(mu - values[nearest]));
    q[nearest] += sd.basis.col(k) * sd.basis.col(k).adjoint();
    ++hits[nearest];
  }
  for (std::size_t i = 0; i < a.count(); ++i) {
    if (hits[i] != a.multiplicity(i)) {
      throw NeighborhoodError("cross_section: eigenvalue clusters of x do not match a");
    }
  }
  if (mode == SectionMode::kOnOrbit) {
    const double scale = std::max(1.0, std::abs(values.back()) + std::abs(values.front()));
    if (mismatch > 1e-9 * scale) throw OffOrbit("cross_section: spectrum of x differs from spectrum of a");
  }

  Matrix u = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < a.count(); ++i) {
    const Matrix p = a.projection(i);
    const Matrix diff = p - q[i];
    const Matrix m = identity(n) - diff * diff;
    const Matrix inv_root = spectral(m).apply([](double v) { return 1.0 / std::sqrt(v); });
    u += q[i] * p * inv_root;
  }
  return u;
}

struct TangentNormalSplit {
  Matrix tangent;
  Matrix normal;
};

/// Splits X into the block-diagonal part in the eigenspaces of p (commutes
/// with p, normal to the orbit) and the off-diagonal remainder (tangent).
inline TangentNormalSplit tangent_normal_split(const OrbitPoint& p, const Matrix& x) {
  require_same_dim(p.dim(), x.rows(), "tangent_normal_split");
  if (!is_hermitian(x)) throw NotHermitian("tangent_normal_split: X is not Hermitian");
  Matrix normal = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.base().count(); ++i) {
    const Matrix q = p.projection(i);
    normal += q * x * q;
  }
  normal = hermitize(normal);
  return {hermitize(x - normal), normal};
}

/// A_0 (block-diagonal) and A_1 (block-anti-diagonal) components w.r.t. a
/// projector.
struct BlockSplit {
  Matrix projector;
  Matrix diag;
  Matrix codiag;
};

inline Matrix diag_part(const Matrix& projector, const Matrix& m) {
  const Matrix c = identity(projector.rows()) - projector;
  return projector * m * projector + c * m * c;
}

inline Matrix codiag_part(const Matrix& projector, const Matrix& m) {
  const Matrix c = identity(projector.rows()) - projector;
  return projector * m * c + c * m * projector;
}

inline void require_projector(const Matrix& projector, const char* what) {
  if (!is_projector(projector)) throw NotProjector(std::string(what) + ": A is not an orthogonal projector");
}

/// Grading of an arbitrary square matrix; used for products and brackets.
inline BlockSplit block_split(const Matrix& projector, const Matrix& m) {
  require_same_dim(projector.rows(), m.rows(), "block_split");
  require_projector(projector, "block_split");
  return {projector, diag_part(projector, m), codiag_part(projector, m)};
}

inline BlockSplit cartan_split(const Matrix& projector, const Matrix& h) {
  if (!is_hermitian(h)) throw NotHermitian("cartan_split: h is not Hermitian");
  BlockSplit s = block_split(projector, h);
  s.diag = hermitize(s.diag);
  s.codiag = hermitize(s.codiag);
  return s;
}

/// |h^2 A^2 - 2 hAhA + 2 AhAh - A^2 h^2|_2
inline double flat_residual(const Matrix& projector, const Matrix& h) {
  require_same_dim(projector.rows(), h.rows(), "flat_residual");
  require_projector(projector, "flat_residual");
  const Matrix& a = projector;
  const Matrix h2 = h * h;
  const Matrix a2 = a * a;
  const Matrix ha = h * a;
  const Matrix ah = a * h;
  return hs_norm(h2 * a2 - 2.0 * ha * ha + 2.0 * ah * ah - a2 * h2);
}

/// |X - X*|_2 with X = h e^a h e^{-a} + h e^{-a} h e^a.
inline double sigma_residual(const Matrix& a, const Matrix& h) {
  require_same_dim(a.rows(), h.rows(), "sigma_residual");
  const Matrix ea = hermitian_exp(a);
  const Matrix ema = hermitian_exp(-a);
  const Matrix x = h * ea * h * ema + h * ema * h * ea;
  return hs_norm(x - x.adjoint());
}

/// |h e^a h e^{-a} - e^a h e^{-a} h|_2 with w = i h.
inline double ambient_geodesy_residual(const Matrix& a, const Matrix& w) {
  require_same_dim(a.rows(), w.rows(), "ambient_geodesy_residual");
  const Matrix h = Complex(0.0, -1.0) * w;
  const Matrix ea = hermitian_exp(a);
  const Matrix ema = hermitian_exp(-a);
  return hs_norm(h * ea * h * ema - ea * h * ema * h);
}

/// Minimal-norm x with i[x, p] = v, solved blockwise in the eigenspaces of p.
inline Matrix solve_bracket(const OrbitPoint& p, const Matrix& v) {
  require_same_dim(p.dim(), v.rows(), "solve_bracket");
  const std::size_t m = p.base().count();
  std::vector<Matrix> q;
  for (std::size_t i = 0; i < m; ++i) q.push_back(p.projection(i));
  Matrix x = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double mu_i = std::exp(p.base().eigenvalues()[i]);
      const double mu_j = std::exp(p.base().eigenvalues()[j]);
      x += (q[i] * v * q[j]) / Complex(0.0, mu_j - mu_i);
    }
  }
  return hermitize(x);
}

/// Initial velocity i[g h g*, p] of t -> e^{itghg*} p e^{-itghg*}.
inline Matrix orbit_velocity(const OrbitPoint& p, const Matrix& h) {
  const Matrix x = p.g() * h * p.g().adjoint();
  return hermitize(Complex(0.0, 1.0) * commutator(x, p.realization()));
}

/// The curve e^{itghg*} p e^{-itghg*} = g e^{ith} e^a e^{-ith} g*.
inline OrbitPoint orbit_geodesic(const OrbitPoint& p, const Matrix& h, double t) {
  return OrbitPoint(p.base(), p.g() * unitary_exp(t * h));
}

inline void require_projector_base(const OrbitPoint& p, const char* what) {
  if (!p.base().is_projector_base()) {
    throw NotProjector(std::string(what) + ": base is not of the form e^a = 1 + A with A a projector");
  }
}

/// Co-diagonal generator h (base coordinates) of the orbit geodesic with
/// initial velocity v.
inline Matrix orbit_generator(const OrbitPoint& p, const Matrix& v) {
  require_projector_base(p, "orbit_exp");
  require_same_dim(p.dim(), v.rows(), "orbit_exp");
  const TangentNormalSplit split = tangent_normal_split(p, v);
  if (hs_norm(split.normal) > 1e-8 * hs_norm(v)) {
    throw NotTangent("orbit_exp: v has a normal component");
  }
  const Matrix x = solve_bracket(p, split.tangent);
  const Matrix y = p.g().adjoint() * x * p.g();
  return hermitize(codiag_part(p.base().projector(), y));
}

/// exp_p(v) = e^{ighg*} p e^{-ighg*}, h the co-diagonal part of g* x g where
/// v = i[x, p]. Defined on the whole tangent space.
inline OrbitPoint orbit_exp(const OrbitPoint& p, const Matrix& v) {
  return orbit_geodesic(p, orbit_generator(p, v), 1.0);
}

struct OrbitLog {
  Matrix h;             // co-diagonal w.r.t. the base projector
  double commutation;   // |[w* g e^{ih}, e^a]|_2
  double spectrum_drift;
  bool non_unique;      // some principal angle is pi/2
};

namespace detail {

// Presentation of q over the base of p: returns w with q = w e^{a_p} w*.
inline Matrix rebase(const OrbitPoint& p, const OrbitPoint& q) {
  const FiniteSpectrumHermitian& bp = p.base();
  const FiniteSpectrumHermitian& bq = q.base();
  if (bp.count() != bq.count()) throw OffOrbit("orbit_log: points lie on different orbits");
  for (std::size_t i = 0; i < bp.count(); ++i) {
    if (std::abs(bp.eigenvalues()[i] - bq.eigenvalues()[i]) > 1e-10) {
      throw OffOrbit("orbit_log: points lie on different orbits");
    }
    if (bp.multiplicity(i) != bq.multiplicity(i)) throw RankMismatch("orbit_log: projector ranks differ");
  }
  Matrix v = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < bp.count(); ++i) v += bq.basis(i) * bp.basis(i).adjoint();
  return q.g() * v;
}

}  // namespace detail

/**
 * Co-diagonal h with e^{itghg*} p e^{-itghg*} joining p (t = 0) to q (t = 1).
 *
 * Principal angles between range(A) and range(g* w A w* g) come from the SVD
 * of the cross block; h is the block anti-diagonal angle operator. When an
 * angle equals pi/2 the SVD picks one of several minimal generators.
 */
inline OrbitLog orbit_log(const OrbitPoint& p, const OrbitPoint& q) {
  require_same_dim(p.dim(), q.dim(), "orbit_log");
  require_projector_base(p, "orbit_log");
  const Matrix w = detail::rebase(p, q);
  const FiniteSpectrumHermitian& base = p.base();
  const Eigen::Index n = p.dim();

  Matrix h = Matrix::Zero(n, n);
  bool non_unique = false;
  if (base.count() == 2) {
    const Matrix& e = base.basis(1);  // range of A
    const Matrix& f = base.basis(0);  // kernel of A
    const Matrix y = p.g().adjoint() * w * e;
    const Matrix top = e.adjoint() * y;
    const Matrix bottom = f.adjoint() * y;
    Eigen::JacobiSVD<Matrix> svd(top, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix z = bottom * svd.matrixV();
    const Eigen::Index r = top.rows();
    RealVector ratio(r);
    for (Eigen::Index k = 0; k < r; ++k) {
      const double c = svd.singularValues()(k);
      const double s = z.col(k).norm();
      const double theta = std::atan2(s, c);
      ratio(k) = s > 1e-300 ? theta / s : 1.0;
      if (c < 1e-8) non_unique = true;
    }
    const Matrix angle = z * ratio.asDiagonal() * svd.matrixU().adjoint();  // U2 Theta U1*
    const Complex i(0.0, 1.0);
    h = hermitize(i * e * angle.adjoint() * f.adjoint() - i * f * angle * e.adjoint());
  }

  const Matrix reached = p.g() * unitary_exp(h);
  const Matrix ea = base.exp_matrix();
  const Matrix rel = w.adjoint() * reached;
  OrbitLog out{h, hs_norm(commutator(rel, ea)), 0.0, non_unique};
  out.spectrum_drift = spectrum_drift(OrbitPoint(base, reached));
  return out;
}

/// L = (sqrt 2 / 2) |h|_2 for co-diagonal h.
inline double orbit_length(const Matrix& projector, const Matrix& h) {
  require_same_dim(projector.rows(), h.rows(), "orbit_length");
  require_projector(projector, "orbit_length");
  if (!is_hermitian(h)) throw NotHermitian("orbit_length: h is not Hermitian");
  if (hs_norm(diag_part(projector, h)) > 1e-10 * std::max(1.0, hs_norm(h))) {
    throw NotCodiagonal("orbit_length: h is not co-diagonal");
  }
  return std::numbers::sqrt2 / 2.0 * hs_norm(h);
}

struct CoincidenceWitness {
  UnitizedOperator u;  // 1 + k
  Matrix support;      // orthonormal basis of T = R(a) + R(g a g*)
};

/**
 * Unitary of the form 1 + k, k supported on T = R(a) + R(gag*), with
 * u a u* = g a g*. On T both operators are diagonalized, a = P D P* and
 * gag* = Q D Q*, and k = P_T (Q P* - 1_T) P_T.
 */
inline CoincidenceWitness orbits_coincide_witness(const FiniteSpectrumHermitian& a, const Matrix& g) {
  require_same_dim(a.dim(), g.rows(), "orbits_coincide_witness");
  if (!is_unitary(g)) throw NotUnitary("orbits_coincide_witness: g is not unitary");
  const Eigen::Index n = a.dim();
  const Matrix b = hermitize(g * a.matrix() * g.adjoint());

  Eigen::Index range_cols = 0;
  for (std::size_t i = 0; i < a.count(); ++i) {
    if (std::abs(a.eigenvalues()[i]) > kStructuralTol) range_cols += a.multiplicity(i);
  }
  if (range_cols == 0) return {UnitizedOperator::unit(n), Matrix(n, 0)};

  Matrix span(n, 2 * range_cols);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < a.count(); ++i) {
    if (std::abs(a.eigenvalues()[i]) <= kStructuralTol) continue;
    span.middleCols(at, a.multiplicity(i)) = a.basis(i);
    span.middleCols(range_cols + at, a.multiplicity(i)) = g * a.basis(i);
    at += a.multiplicity(i);
  }
  Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  const RealVector& sv = svd.singularValues();
  while (rank < sv.size() && sv(rank) > 1e-10 * sv(0)) ++rank;
  const Matrix t_basis = svd.matrixU().leftCols(rank);

  const Matrix p = spectral(Matrix(t_basis.adjoint() * a.matrix() * t_basis)).basis;
  const Matrix q = spectral(Matrix(t_basis.adjoint() * b * t_basis)).basis;
  const Matrix k = t_basis * (q * p.adjoint() - identity(rank)) * t_basis.adjoint();
  return {UnitizedOperator(1.0, k), t_basis};
}

}  // namespace orbitgeo
