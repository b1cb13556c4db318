#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "orbitgeo/manifold.hpp"
#include "orbitgeo/orbit.hpp"
#include "orbitgeo/sampling.hpp"

namespace orbitgeo::check {

struct SuiteConfig {
  std::uint64_t seed = 0;
  int trials = 200;  // per dimension
  std::vector<Eigen::Index> dims{2, 3, 4, 6, 8};
  std::map<std::string, double> tolerances;  // key: suite or suite.check
  double step = 1e-4;
  int jobs = 1;
};

struct Row {
  std::string suite;  // sub-check name, e.g. "geodesic.euler"
  int trial = 0;
  std::uint64_t seed = 0;
  Eigen::Index dim = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteTiming {
  std::string suite;
  double seconds = 0.0;
};

struct Report {
  std::vector<Row> rows;
  std::vector<SuiteTiming> timings;

  std::size_t failed() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const Row& r) { return !r.pass; }));
  }
  std::size_t passed() const { return rows.size() - failed(); }
  bool ok() const { return failed() == 0; }

  /// Largest residual per sub-check, in row order of first appearance.
  std::vector<std::pair<std::string, double>> max_residuals() const {
    std::vector<std::pair<std::string, double>> out;
    for (const Row& r : rows) {
      auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == r.suite; });
      if (it == out.end()) {
        out.emplace_back(r.suite, r.residual);
      } else if (!(r.residual <= it->second)) {
        it->second = r.residual;
      }
    }
    return out;
  }

  std::vector<const Row*> failures() const {
    std::vector<const Row*> out;
    for (const Row& r : rows) {
      if (!r.pass) out.push_back(&r);
    }
    return out;
  }
};

inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const Report& report) {
  os << "suite,trial,seed,dim,residual,tolerance,pass\n";
  for (const Row& r : report.rows) {
    os << r.suite << ',' << r.trial << ',' << r.seed << ',' << r.dim << ',' << csv_number(r.residual) << ','
       << csv_number(r.tolerance) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

inline std::uint64_t trial_seed(std::uint64_t seed, std::string_view suite, int trial) {
  return detail::splitmix64(detail::splitmix64(seed ^ detail::fnv1a(suite)) + static_cast<std::uint64_t>(trial));
}

/// One randomized trial of a suite: owns the RNG stream and collects rows.
class Trial {
 public:
  Trial(std::string suite, int index, std::uint64_t seed, Eigen::Index dim, const SuiteConfig& config)
      : rng(seed), suite_(std::move(suite)), index_(index), seed_(seed), dim_(dim), config_(config) {}

  sampling::Rng rng;

  Eigen::Index dim() const { return dim_; }
  int index() const { return index_; }
  double step() const { return config_.step; }
  // Index of this trial within its dimension block.
  int local() const { return index_ % config_.trials; }

  /// Passes when residual <= tolerance; the suite-wide override applies.
  void upper(std::string_view check, double residual, double tol) {
    add(check, residual, resolve(check, tol, true));
  }

  /// Passes when value >= threshold; reported as threshold / value against 1.
  void lower(std::string_view check, double value, double threshold) {
    const double t = resolve(check, threshold, false);
    add(check, value > 0.0 ? t / value : std::numeric_limits<double>::infinity(), 1.0);
  }

  /// Passes only for a residual of exactly zero.
  void exact(std::string_view check, double residual) { add(check, residual, 0.0); }

  std::vector<Row> take() { return std::move(rows_); }

 private:
  double resolve(std::string_view check, double fallback, bool suite_wide) const {
    const std::string full = suite_ + "." + std::string(check);
    if (auto it = config_.tolerances.find(full); it != config_.tolerances.end()) return it->second;
    if (suite_wide) {
      if (auto it = config_.tolerances.find(suite_); it != config_.tolerances.end()) return it->second;
    }
    return fallback;
  }

  void add(std::string_view check, double residual, double tol) {
    rows_.push_back({suite_ + "." + std::string(check), index_, seed_, dim_, residual, tol, residual <= tol});
  }

  std::string suite_;
  int index_;
  std::uint64_t seed_;
  Eigen::Index dim_;
  const SuiteConfig& config_;
  std::vector<Row> rows_;
};

namespace suites {

inline TangentVector random_tangent(Trial& t, const PositivePoint& p) {
  return {p, sampling::hermitian_pair(t.rng, t.dim())};
}

// Hermitian pair diagonal in a shared random eigenbasis, with norm2 = scale
// like the generic samples.
inline UnitizedOperator commuting_pair(Trial& t, const Matrix& basis, double scale) {
  std::normal_distribution<double> normal;
  RealVector d(t.dim());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = normal(t.rng);
  const UnitizedOperator x(normal(t.rng), hermitize(basis * d.cast<Complex>().asDiagonal() * basis.adjoint()));
  return (scale / norm2(x)) * x;
}

inline void metric(Trial& t) {
  const Eigen::Index n = t.dim();
  const PositivePoint p = sampling::positive(t.rng, n);
  const PositivePoint q = sampling::positive(t.rng, n);
  const PositivePoint r = sampling::positive(t.rng, n);
  const TangentVector x = random_tangent(t, p), y = random_tangent(t, p);

  const double xx = metric_at(p, x, x);
  t.upper("symmetry", std::abs(metric_at(p, x, y) - metric_at(p, y, x)) / std::max(1.0, xx), 1e-12);
  t.lower("positivity", xx, std::numeric_limits<double>::min());

  const double d = distance(p, q);
  const UnitizedOperator g = sampling::invertible(t.rng, n);
  t.upper("isometry", std::abs(distance(isometry_action(g, p), isometry_action(g, q)) - d) / std::max(1.0, d), 1e-9);
  t.upper("triangle", std::max(0.0, d - distance(p, r) - distance(r, q)) / std::max(1.0, d), 1e-10);

  // d/ds <V, W> against <DV, W> + <V, DW> along a non-geodesic curve
  const UnitizedOperator h0 = sampling::hermitian_pair(t.rng, n), h1 = sampling::hermitian_pair(t.rng, n);
  const UnitizedOperator h2 = sampling::hermitian_pair(t.rng, n);
  const SampledCurve curve{[=](double s) { return PositivePoint(uo_exp(h0 + s * h1 + (s * s) * h2)); }, t.step()};
  const UnitizedOperator a0 = sampling::hermitian_pair(t.rng, n), a1 = sampling::hermitian_pair(t.rng, n);
  const UnitizedOperator b0 = sampling::hermitian_pair(t.rng, n), b1 = sampling::hermitian_pair(t.rng, n);
  const VectorField v = [&](double s) { return TangentVector(curve.at(s), a0 + std::sin(2 * s) * a1); };
  const VectorField w = [&](double s) { return TangentVector(curve.at(s), b0 + (s * s) * b1); };
  const auto inner = [&](double s) { return metric_at(curve.at(s), v(s), w(s)); };
  const double s = 0.5, hs = curve.step;
  const PositivePoint at = curve.at(s);
  const double lhs = (inner(s + hs) - inner(s - hs)) / (2 * hs);
  const double rhs = metric_at(at, covariant_derivative(curve, v, s), w(s)) + metric_at(at, v(s), covariant_derivative(curve, w, s));
  t.upper("compatibility", std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)), 1e-5);

  std::normal_distribution<double> normal;
  const UnitizedOperator gx(Complex(normal(t.rng), normal(t.rng)), sampling::gaussian_matrix(t.rng, n, n));
  const UnitizedOperator gy(Complex(normal(t.rng), normal(t.rng)), sampling::gaussian_matrix(t.rng, n, n));
  const UnitizedOperator z = sampling::hermitian_pair(t.rng, n);
  const double sx = norm2(gx), sy = norm2(gy);
  const double c1 = std::abs(inner2(gx * gy, gy.adjoint() * gx.adjoint()) - inner2(gy * gx, gx.adjoint() * gy.adjoint()));
  const double c2 = std::abs(inner2(z * gx, gy * z) - inner2(gx * z, z * gy));
  t.upper("trace_cyclicity", std::max(c1 / std::max(1.0, sx * sx * sy * sy), c2 / std::max(1.0, sx * sy)), 1e-10);

  t.upper("homomorphism", hs_norm((gx * gy).realize() - gx.realize() * gy.realize()) / std::max(1.0, sx * sy), 1e-12);
  const Matrix pure = sampling::hermitian(t.rng, n) * (1.0 + t.local() % 3);
  const double radius = spectral(pure).eigenvalues.cwiseAbs().maxCoeff();
  t.upper("spectral_radius", std::max(0.0, radius - hs_norm(pure)), 1e-12);
  const double op = operator_norm(gx.realize() * gy.realize());
  t.upper("submultiplicative", std::max(0.0, op - operator_norm(gx.realize()) * operator_norm(gy.realize())) / std::max(1.0, op), 1e-12);
}

inline void geodesic(Trial& t) {
  const Eigen::Index n = t.dim();
  const PositivePoint p = sampling::positive(t.rng, n);
  const PositivePoint q = sampling::positive(t.rng, n);
  const double scale = std::max({1.0, norm2(p.value()), norm2(q.value())});
  const SampledCurve curve{[&](double s) { return orbitgeo::geodesic(p, q, s); }, t.step()};

  t.upper("endpoints", std::max(relative_gap(curve.at(0.0).value(), p.value()), relative_gap(curve.at(1.0).value(), q.value())), 1e-10);
  double euler = 0.0;
  for (double s : {0.25, 0.5, 0.75}) euler = std::max(euler, geodesic_residual(curve, s));
  t.upper("euler", euler / scale, 1e-5);
  t.upper("reversal", relative_gap(curve.at(0.3).value(), orbitgeo::geodesic(q, p, 0.7).value()), 1e-10);

  t.upper("exp_log", relative_gap(exp_map(p, log_map(p, q)).value(), q.value()), 1e-9);
  const TangentVector v = random_tangent(t, p);
  t.upper("log_exp", relative_gap(log_map(p, exp_map(p, v)).value(), v.value()), 1e-9);

  const VectorField speed = [&](double s) { return TangentVector(curve.at(s), curve.velocity(s).hermitian_part()); };
  t.upper("covariant", norm2(covariant_derivative(curve, speed, 0.5).value()) / scale, 1e-5);

  const PositivePoint p1 = sampling::positive(t.rng, n, true);
  const PositivePoint q1 = sampling::positive(t.rng, n, true);
  double leaf = 0.0;
  for (int k = 0; k <= 8; ++k) leaf = std::max(leaf, std::abs(orbitgeo::geodesic(p1, q1, k / 8.0).leaf() - 1.0));
  t.upper("leaf", leaf, std::numeric_limits<double>::epsilon());

  // Quadrature is the expensive part; a few trials per dimension.
  if (t.local() < 2) {
    const double d = distance(p, q);
    const double length = curve_length(curve);
    t.upper("length", std::abs(length - d) / std::max(1.0, d), 1e-7);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20; ++k) {
      const UnitizedOperator bump = (0.05 * (1 + k % 4)) * sampling::hermitian_pair(t.rng, n);
      const SampledCurve detour{[&, bump](double s) {
                                  const PositivePoint base = orbitgeo::geodesic(p, q, s);
                                  return exp_map(base, TangentVector(base, std::sin(std::numbers::pi * s) * bump));
                                },
                                t.step()};
      best = std::min(best, curve_length(detour));
    }
    t.upper("minimality", std::max(0.0, length - best), 1e-6);
  }
}

inline void curvature(Trial& t) {
  const Eigen::Index n = t.dim();
  const PositivePoint p = sampling::positive(t.rng, n);
  const TangentVector x = random_tangent(t, p), y = random_tangent(t, p);
  const TangentVector z = random_tangent(t, p), w = random_tangent(t, p);

  const UnitizedOperator sum = orbitgeo::curvature(p, x, y, z).value() + orbitgeo::curvature(p, y, x, z).value();
  t.upper("antisymmetry", norm2(sum), 1e-14);
  const double lhs = metric_at(p, orbitgeo::curvature(p, x, y, z), w);
  const double rhs = metric_at(p, orbitgeo::curvature(p, z, w, x), y);
  t.upper("pair_symmetry", std::abs(lhs - rhs), 1e-10);
  t.upper("sectional", sectional(p, x, y), 1e-10);

  const Matrix basis = sampling::unitary(t.rng, n);
  const PositivePoint c(uo_exp(commuting_pair(t, basis, 1.0)));
  const TangentVector cx(c, commuting_pair(t, basis, 1.0)), cy(c, commuting_pair(t, basis, 1.0));
  t.upper("flat_commuting", std::abs(sectional(c, cx, cy)), 1e-12);
}

inline void emi(Trial& t) {
  const Eigen::Index n = t.dim();
  const double scale = 1.0 + t.local() % 4;
  const UnitizedOperator x = scale * sampling::hermitian_pair(t.rng, n);
  const UnitizedOperator y = scale * sampling::hermitian_pair(t.rng, n);
  const InequalityCheck c = emi_check(x, y);
  t.upper("inequality", (c.lhs - c.rhs) / std::max(1.0, c.rhs), 1e-10);
  const double d = distance(PositivePoint(uo_exp(x)), PositivePoint(uo_exp(y)));
  t.upper("distance", std::abs(c.rhs - d) / std::max(1.0, d), 1e-9);

  const Matrix basis = sampling::unitary(t.rng, n);
  const InequalityCheck e = emi_check(commuting_pair(t, basis, scale), commuting_pair(t, basis, scale));
  t.upper("equality", std::abs(e.lhs - e.rhs) / std::max(1.0, e.rhs), 1e-10);
}

inline void segal(Trial& t) {
  const Eigen::Index n = t.dim();
  const double scale = 1.0 + t.local() % 4;
  const InequalityCheck c = segal_check(scale * sampling::hermitian_pair(t.rng, n), scale * sampling::hermitian_pair(t.rng, n));
  t.upper("inequality", (c.lhs - c.rhs) / std::max(1.0, c.rhs), 1e-10);

  const Matrix basis = sampling::unitary(t.rng, n);
  const InequalityCheck e = segal_check(commuting_pair(t, basis, scale), commuting_pair(t, basis, scale));
  t.upper("equality", std::abs(e.lhs - e.rhs) / std::max(1.0, e.rhs), 1e-10);
}

inline void orbit(Trial& t) {
  const Eigen::Index n = t.dim();
  const Eigen::Index rank = sampling::uniform_index(t.rng, 1, n - 1);
  const FiniteSpectrumHermitian base = sampling::projector_base(t.rng, n, rank);
  const OrbitPoint p(base, sampling::unitary(t.rng, n));
  const OrbitPoint q(base, sampling::unitary(t.rng, n));

  const OrbitLog log = orbit_log(p, q);
  const OrbitPoint reached = orbit_exp(p, orbit_velocity(p, log.h));
  t.upper("log_exp", hs_norm(reached.realization() - q.realization()), 1e-7);
  t.upper("commutation", log.commutation, 1e-8);
  t.upper("spectrum", std::max({spectrum_drift(p), spectrum_drift(q), spectrum_drift(reached), log.spectrum_drift}), 1e-10);
  t.exact("leaf", std::abs(reached.point().leaf() - 1.0));

  const Matrix v = tangent_normal_split(p, sampling::hermitian(t.rng, n)).tangent;
  const Matrix h = orbit_generator(p, v);
  const double hs = t.step();
  const Matrix fd = (orbit_geodesic(p, h, hs).realization() - orbit_geodesic(p, h, -hs).realization()) / (2 * hs);
  t.upper("velocity", hs_norm(fd - v) / std::max(1.0, hs_norm(v)), 1e-8);

  const Matrix x = sampling::hermitian(t.rng, n);
  const TangentNormalSplit split = tangent_normal_split(p, x);
  const double orth = std::abs(metric_at(p.point(), TangentVector(p.point(), UnitizedOperator::pure(split.tangent)),
                                         TangentVector(p.point(), UnitizedOperator::pure(split.normal))));
  t.upper("tangent_split", std::max({orth, hs_norm(commutator(split.normal, p.realization())), hs_norm(split.tangent + split.normal - x)}), 1e-10);

  const SampledCurve curve{[&](double s) { return orbit_geodesic(p, log.h, s).point(); }, t.step()};
  const double closed = orbit_length(base.projector(), log.h);
  t.upper("length", closed > 0.0 ? std::abs(curve_length(curve) - closed) / closed : 0.0, 1e-6);

  const FiniteSpectrumHermitian general = sampling::finite_spectrum(t.rng, n, std::min<Eigen::Index>(n, 2 + t.local() % 3));
  const OrbitPoint pg(general, sampling::unitary(t.rng, n));
  const Matrix vg = tangent_normal_split(pg, sampling::hermitian(t.rng, n)).tangent;
  t.upper("solve_bracket", hs_norm(hermitize(Complex(0.0, 1.0) * commutator(solve_bracket(pg, vg), pg.realization())) - vg), 1e-10);
  const Matrix moved = orbit_action(sampling::unitary(t.rng, n), general.matrix());
  t.upper("action_spectrum", spectrum_drift(moved, general.spectrum()), 1e-10);

  // Witness for a base of rank <= n/2 with distinct nonzero eigenvalues.
  const Eigen::Index wrank = sampling::uniform_index(t.rng, 1, n / 2);
  const Matrix wb = sampling::unitary(t.rng, n);
  RealVector values = RealVector::Zero(n);
  for (Eigen::Index k = 0; k < wrank; ++k) values(n - 1 - k) = 1.0 + k;
  const FiniteSpectrumHermitian a = FiniteSpectrumHermitian::from_matrix(hermitize(wb * values.cast<Complex>().asDiagonal() * wb.adjoint()));
  const Matrix g = sampling::unitary(t.rng, n);
  const CoincidenceWitness wit = orbits_coincide_witness(a, g);
  const Matrix u = wit.u.realize();
  const Matrix pt = wit.support * wit.support.adjoint();
  t.upper("witness", std::max({hs_norm(u.adjoint() * u - identity(n)), hs_norm(orbit_action(u, a.matrix()) - orbit_action(g, a.matrix())),
                               hs_norm(wit.u.part() - pt * wit.u.part() * pt)}), 1e-9);

  // Even trials draw w commuting with a, odd trials a generic w.
  const FiniteSpectrumHermitian fa = sampling::finite_spectrum(t.rng, n, 1 + t.local() % 4);
  const Matrix wh = t.index() % 2 == 0 ? sampling::commuting_hermitian(t.rng, fa) : sampling::hermitian(t.rng, n);
  const Matrix w = Complex(0.0, 1.0) * wh;
  const bool flat = ambient_geodesy_residual(fa.matrix(), w) < 1e-10;
  const bool commutes = hs_norm(commutator(w, fa.matrix())) < 1e-8;
  t.exact("dichotomy", flat == commutes ? 0.0 : 1.0);

  double drift = 0.0;
  for (int draw = 0; draw < 50 && drift <= 1e-6; ++draw) {
    const Matrix tv = tangent_normal_split(p, sampling::hermitian(t.rng, n)).tangent;
    const PositivePoint e = exp_map(p.point(), TangentVector(p.point(), UnitizedOperator::pure(tv)));
    drift = std::max(drift, spectrum_drift(e.value().realize(), base.spectrum().array().exp().matrix()));
  }
  t.lower("no_geodesic_point", drift, 1e-6);
}

inline void cartan(Trial& t) {
  const Eigen::Index n = t.dim();
  const Matrix a = sampling::projector(t.rng, n, sampling::uniform_index(t.rng, 1, n - 1));
  const Matrix c = identity(n) - a;
  const Matrix hx = sampling::hermitian(t.rng, n);
  const BlockSplit x = cartan_split(a, hx);
  const BlockSplit y = cartan_split(a, sampling::hermitian(t.rng, n));
  t.upper("reconstruct", std::max({hs_norm(x.diag + x.codiag - hx), hs_norm(a * x.diag * c) + hs_norm(c * x.diag * a),
                                   hs_norm(a * x.codiag * a) + hs_norm(c * x.codiag * c)}), 1e-12);

  const auto co = [&](const Matrix& m) { return hs_norm(codiag_part(a, m)); };
  const auto di = [&](const Matrix& m) { return hs_norm(diag_part(a, m)); };
  t.upper("grading", std::max({co(commutator(x.diag, y.diag)), di(commutator(x.diag, y.codiag)), co(commutator(x.codiag, y.codiag)),
                               co(x.diag * y.diag), di(x.diag * y.codiag), di(x.codiag * y.diag), co(x.codiag * y.codiag)}), 1e-12);

  const Matrix h1 = sampling::codiagonal(t.rng, a) * (1.0 + t.local() % 3);
  t.upper("flat_codiag", flat_residual(a, h1), 1e-10);
  t.upper("sigma_codiag", sigma_residual(std::numbers::ln2 * a, h1), 1e-10);

  const double flat = flat_residual(a, hx);
  t.upper("flat_identity", std::abs(flat - hs_norm(commutator(x.diag, x.codiag))), 1e-12);
  t.lower("flat_obstruction", flat, 1e-8);
  t.lower("sigma_generic", sigma_residual(std::numbers::ln2 * a, hx), 1e-6);
}

inline void section(Trial& t) {
  const Eigen::Index n = t.dim();
  const FiniteSpectrumHermitian a = sampling::finite_spectrum(t.rng, n, std::min<Eigen::Index>(n, 2 + t.local() % 3));
  t.exact("identity", hs_norm(cross_section(a, a.matrix()) - identity(n)));

  const double s = 0.4 * a.neighborhood_radius() / std::max(1.0, 2.0 * hs_norm(a.matrix()));
  const Matrix x = orbit_action(unitary_exp(s * sampling::hermitian(t.rng, n)), a.matrix());
  const Matrix u = cross_section(a, x, SectionMode::kOnOrbit);
  t.upper("contract", hs_norm(orbit_action(u, a.matrix()) - x), 1e-9);
  t.upper("unitary", hs_norm(u.adjoint() * u - identity(n)), 1e-10);

  Matrix far = a.matrix();
  far(0, 0) += 2.0 * a.neighborhood_radius();
  double outside = 1.0;
  try {
    cross_section(a, far);
  } catch (const NeighborhoodError&) {
    outside = 0.0;
  }
  t.exact("neighborhood", outside);
}

}  // namespace suites

using SuiteFn = void (*)(Trial&);

struct SuiteEntry {
  std::string_view name;
  SuiteFn run;
};

inline constexpr std::string_view kSuiteNames[] = {"metric", "geodesic", "curvature", "emi", "segal", "orbit", "cartan", "section"};

inline const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> entries{
      {"metric", suites::metric},   {"geodesic", suites::geodesic}, {"curvature", suites::curvature},
      {"emi", suites::emi},         {"segal", suites::segal},       {"orbit", suites::orbit},
      {"cartan", suites::cartan},   {"section", suites::section},
  };
  return entries;
}

/// Fails fast when the registry and the static suite list drift apart.
inline void validate_registry() {
  const auto& entries = registry();
  for (std::string_view name : kSuiteNames) {
    const auto hits = std::count_if(entries.begin(), entries.end(), [&](const SuiteEntry& e) { return e.name == name; });
    if (hits != 1) throw Error("check registry: suite '" + std::string(name) + "' is missing or duplicated");
  }
  if (entries.size() != std::size(kSuiteNames)) throw Error("check registry: unexpected suite registered");
}

inline bool is_suite_name(std::string_view name) {
  return name == "all" || std::find(std::begin(kSuiteNames), std::end(kSuiteNames), name) != std::end(kSuiteNames);
}

inline void validate(const SuiteConfig& config) {
  if (config.trials < 1) throw Error("check: trials must be positive");
  if (config.dims.empty()) throw Error("check: no dimensions given");
  for (Eigen::Index d : config.dims) {
    if (d < 2) throw Error("check: dimensions must be at least 2");
  }
  if (!(config.step > 0.0 && config.step < 0.1)) throw Error("check: step must lie in (0, 0.1)");
  for (const auto& [key, value] : config.tolerances) {
    const std::string suite = key.substr(0, key.find('.'));
    if (suite == "all" || !is_suite_name(suite)) throw Error("check: unknown suite in tolerance '" + key + "'");
    if (!(value > 0.0)) throw Error("check: tolerance for '" + key + "' must be positive");
  }
}

namespace detail {

inline std::vector<Row> run_trial(const SuiteEntry& entry, const SuiteConfig& config, int index) {
  const Eigen::Index dim = config.dims[static_cast<std::size_t>(index / config.trials)];
  const std::uint64_t seed = trial_seed(config.seed, entry.name, index);
  Trial trial(std::string(entry.name), index, seed, dim, config);
  try {
    entry.run(trial);
  } catch (const Error&) {
    // A throwing trial is recorded as a failed row of its own.
    std::vector<Row> rows = trial.take();
    rows.push_back({std::string(entry.name) + ".error", index, seed, dim, std::numeric_limits<double>::infinity(), 0.0, false});
    return rows;
  }
  return trial.take();
}

}  // namespace detail

inline Report run_suite(const SuiteEntry& entry, const SuiteConfig& config) {
  const int total = config.trials * static_cast<int>(config.dims.size());
  std::vector<std::vector<Row>> per_trial(static_cast<std::size_t>(total));
  const int jobs = std::clamp(config.jobs, 1, total);
  if (jobs == 1) {
    for (int i = 0; i < total; ++i) per_trial[i] = detail::run_trial(entry, config, i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (int i = next++; i < total; i = next++) per_trial[i] = detail::run_trial(entry, config, i);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  Report report;
  for (auto& rows : per_trial) {
    for (Row& r : rows) report.rows.push_back(std::move(r));
  }
  return report;
}

/// Runs one suite or "all"; rows are ordered by (suite, trial).
inline Report run(std::string_view suite, const SuiteConfig& config) {
  validate_registry();
  validate(config);
  if (!is_suite_name(suite)) throw Error("check: unknown suite '" + std::string(suite) + "'");
  Report report;
  for (const SuiteEntry& entry : registry()) {
    if (suite != "all" && suite != entry.name) continue;
    const auto start = std::chrono::steady_clock::now();
    Report part = run_suite(entry, config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.timings.push_back({std::string(entry.name), seconds});
    for (Row& r : part.rows) report.rows.push_back(std::move(r));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const Row& a, const Row& b) {
    const auto sa = std::string_view(a.suite).substr(0, a.suite.find('.'));
    const auto sb = std::string_view(b.suite).substr(0, b.suite.find('.'));
    if (sa != sb) return sa < sb;
    return a.trial < b.trial;
  });
  return report;
}

}  // namespace orbitgeo::check
