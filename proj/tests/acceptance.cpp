// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "orbitgeo/manifold.hpp"
#include "orbitgeo/orbit.hpp"
#include "orbitgeo/sampling.hpp"

namespace {

using namespace orbitgeo;
using Clock = std::chrono::steady_clock;

const std::vector<Eigen::Index> kDims{2, 3, 4, 6, 8};
const Complex kI(0.0, 1.0);

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

sampling::Rng rng_for(int criterion) { return sampling::Rng(0xacce97ULL * 1000 + criterion); }

// Pair with norm2 = scale, diagonal in the given basis.
UnitizedOperator commuting_pair(sampling::Rng& rng, const Matrix& basis, double scale) {
  std::normal_distribution<double> normal;
  RealVector d(basis.rows());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
  const UnitizedOperator x(normal(rng), hermitize(basis * d.cast<Complex>().asDiagonal() * basis.adjoint()));
  return (scale / norm2(x)) * x;
}

void geodesic_correctness() {
  auto rng = rng_for(1);
  const auto t0 = Clock::now();
  double euler = 0.0, ends = 0.0;
  for (Eigen::Index n : kDims) {
    for (int k = 0; k < 200; ++k) {
      const PositivePoint p = sampling::positive(rng, n);
      const PositivePoint q = sampling::positive(rng, n);
      const double scale = std::max({1.0, norm2(p.value()), norm2(q.value())});
      const SampledCurve curve{[&](double t) { return geodesic(p, q, t); }};
      for (double t : {0.25, 0.5, 0.75}) euler = std::max(euler, geodesic_residual(curve, t) / scale);
      ends = std::max({ends, relative_gap(curve.at(0.0).value(), p.value()), relative_gap(curve.at(1.0).value(), q.value())});
    }
  }
  const double elapsed = seconds_since(t0);
  report(1, "Geodesic correctness", euler < 1e-5 && ends <= 1e-10 && elapsed < 30.0,
         fmt("max euler/scale %.3e (< 1e-5), endpoint gap %.3e (<= 1e-10), %.2f s (< 30 s)", euler, ends, elapsed));
}

void exp_log_inversion() {
  auto rng = rng_for(2);
  double a = 0.0, b = 0.0;
  for (Eigen::Index n : kDims) {
    for (int k = 0; k < 200; ++k) {
      const PositivePoint p = sampling::positive(rng, n);
      const PositivePoint q = sampling::positive(rng, n);
      const TangentVector v(p, sampling::hermitian_pair(rng, n));
      a = std::max(a, relative_gap(exp_map(p, log_map(p, q)).value(), q.value()));
      b = std::max(b, relative_gap(log_map(p, exp_map(p, v)).value(), v.value()));
    }
  }
  report(2, "exp/log inversion", a <= 1e-9 && b <= 1e-9, fmt("exp(log q) gap %.3e, log(exp V) gap %.3e (<= 1e-9)", a, b));
}

void isometry() {
  auto rng = rng_for(3);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const PositivePoint p = sampling::positive(rng, n);
    const PositivePoint q = sampling::positive(rng, n);
    const UnitizedOperator g = sampling::invertible(rng, n);
    const double d = distance(p, q);
    worst = std::max(worst, std::abs(distance(isometry_action(g, p), isometry_action(g, q)) - d) / std::max(1.0, d));
  }
  report(3, "Isometry", worst <= 1e-9, fmt("max relative distance change %.3e (<= 1e-9) over 200 invertible g", worst));
}

void curvature_sign() {
  auto rng = rng_for(4);
  double k_max = -std::numeric_limits<double>::infinity(), anti = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const PositivePoint p = sampling::positive(rng, n);
    const TangentVector x(p, sampling::hermitian_pair(rng, n)), y(p, sampling::hermitian_pair(rng, n));
    const TangentVector z(p, sampling::hermitian_pair(rng, n));
    k_max = std::max(k_max, sectional(p, x, y));
    anti = std::max(anti, norm2(curvature(p, x, y, z).value() + curvature(p, y, x, z).value()));
  }
  report(4, "Nonpositive curvature", k_max <= 1e-10 && anti <= 1e-14,
         fmt("max sectional %.3e (<= 1e-10), antisymmetry %.3e (<= 1e-14)", k_max, anti));
}

void emi_segal() {
  auto rng = rng_for(5);
  int emi_bad = 0, segal_bad = 0;
  double emi_eq = 0.0, segal_eq = 0.0;
  for (int k = 0; k < 500; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const double scale = 1.0 + k % 4;
    if (!emi_check(scale * sampling::hermitian_pair(rng, n), scale * sampling::hermitian_pair(rng, n)).holds()) ++emi_bad;
    if (!segal_check(scale * sampling::hermitian_pair(rng, n), scale * sampling::hermitian_pair(rng, n)).holds()) ++segal_bad;
    const Matrix basis = sampling::unitary(rng, n);
    const InequalityCheck e = emi_check(commuting_pair(rng, basis, scale), commuting_pair(rng, basis, scale));
    emi_eq = std::max(emi_eq, std::abs(e.lhs - e.rhs) / std::max(1.0, e.rhs));
    const InequalityCheck s = segal_check(commuting_pair(rng, basis, scale), commuting_pair(rng, basis, scale));
    segal_eq = std::max(segal_eq, std::abs(s.lhs - s.rhs) / std::max(1.0, s.rhs));
  }
  report(5, "EMI and Segal inequalities", emi_bad == 0 && segal_bad == 0 && emi_eq <= 1e-10 && segal_eq <= 1e-10,
         fmt("violations emi %d segal %d of 500; commuting equality gap emi %.3e segal %.3e (<= 1e-10)", emi_bad, segal_bad,
             emi_eq, segal_eq));
}

void leaf_convexity() {
  auto rng = rng_for(6);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const PositivePoint p = sampling::positive(rng, n, true);
    const PositivePoint q = sampling::positive(rng, n, true);
    for (int j = 0; j <= 8; ++j) worst = std::max(worst, std::abs(geodesic(p, q, j / 8.0).leaf() - 1.0));
  }
  report(6, "Leaf convexity", worst <= std::numeric_limits<double>::epsilon(),
         fmt("max |scalar - 1| %.3e at 9 t values, 200 trials", worst));
}

void dichotomy() {
  auto rng = rng_for(7);
  int wrong = 0, flat_count = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const FiniteSpectrumHermitian a = sampling::finite_spectrum(rng, n, 1 + k % 4);
    const Matrix h = k % 2 == 0 ? sampling::commuting_hermitian(rng, a) : sampling::hermitian(rng, n);
    const Matrix w = kI * h;
    const bool flat = ambient_geodesy_residual(a.matrix(), w) < 1e-10;
    const bool commutes = hs_norm(commutator(w, a.matrix())) < 1e-8;
    flat_count += flat ? 1 : 0;
    wrong += flat != commutes ? 1 : 0;
  }
  report(7, "Commuting-geodesic dichotomy", wrong == 0,
         fmt("misclassified %d of 200 (%d flat, %d not)", wrong, flat_count, 200 - flat_count));
}

void codiagonal_geodesics() {
  auto rng = rng_for(8);
  double flat = 0.0, sigma = 0.0;
  for (int k = 0; k < 500; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const Matrix a = sampling::projector(rng, n, sampling::uniform_index(rng, 1, n - 1));
    const Matrix h = (1.0 + k % 3) * sampling::codiagonal(rng, a);
    flat = std::max(flat, flat_residual(a, h));
    sigma = std::max(sigma, sigma_residual(std::numbers::ln2 * a, h));
  }
  double smallest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const Matrix a = sampling::projector(rng, n, sampling::uniform_index(rng, 1, n - 1));
    const Matrix h = sampling::hermitian(rng, n);
    smallest = std::min(smallest, flat_residual(a, h));
  }
  report(8, "Co-diagonal geodesics", flat < 1e-10 && sigma < 1e-10 && smallest > 1e-8,
         fmt("codiag flat %.3e sigma %.3e (< 1e-10); min obstructed flat %.3e (> 1e-8)", flat, sigma, smallest));
}

void orbit_length_formula() {
  auto rng = rng_for(9);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const OrbitPoint p(sampling::projector_base(rng, n, sampling::uniform_index(rng, 1, n - 1)), sampling::unitary(rng, n));
    const Matrix h = (0.5 + k % 3) * sampling::codiagonal(rng, p.base().projector());
    const SampledCurve curve{[&](double t) { return orbit_geodesic(p, h, t).point(); }};
    const double closed = orbit_length(p.base().projector(), h);
    worst = std::max(worst, std::abs(curve_length(curve) - closed) / closed);
  }
  const double theta = 0.7;
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = h(1, 0) = theta;
  const OrbitPoint p2(FiniteSpectrumHermitian::from_projector(a), identity(2));
  const SampledCurve c2{[&](double t) { return orbit_geodesic(p2, h, t).point(); }};
  const double l2 = std::abs(curve_length(c2) - 2.0 * theta);
  report(9, "Orbit length formula", worst <= 1e-6 && l2 <= 1e-8,
         fmt("max relative quadrature gap %.3e (<= 1e-6); 2x2 |L - 2 theta| %.3e (<= 1e-8)", worst, l2));
}

void orbit_surjectivity() {
  auto rng = rng_for(10);
  double trip = 0.0, drift = 0.0;
  int errors = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const FiniteSpectrumHermitian base = sampling::projector_base(rng, n, sampling::uniform_index(rng, 1, n - 1));
    const OrbitPoint p(base, sampling::unitary(rng, n));
    const OrbitPoint q(base, sampling::unitary(rng, n));
    try {
      const OrbitLog log = orbit_log(p, q);
      const OrbitPoint e = orbit_exp(p, orbit_velocity(p, log.h));
      trip = std::max(trip, hs_norm(e.realization() - q.realization()));
      drift = std::max({drift, spectrum_drift(p), spectrum_drift(q), spectrum_drift(e)});
    } catch (const Error&) {
      ++errors;
    }
  }
  report(10, "Orbit exp/log surjectivity", errors == 0 && trip <= 1e-7 && drift <= 1e-10,
         fmt("log failures %d of 200; roundtrip %.3e (<= 1e-7); spectrum drift %.3e (<= 1e-10)", errors, trip, drift));
}

void cross_section_contract() {
  auto rng = rng_for(11);
  bool identity_exact = true;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const FiniteSpectrumHermitian a = sampling::finite_spectrum(rng, n, std::min<Eigen::Index>(n, 2 + k % 3));
    identity_exact = identity_exact && cross_section(a, a.matrix()) == identity(n);
    const double s = 0.4 * a.neighborhood_radius() / std::max(1.0, 2.0 * hs_norm(a.matrix()));
    const Matrix x = orbit_action(unitary_exp(s * sampling::hermitian(rng, n)), a.matrix());
    const Matrix u = cross_section(a, x, SectionMode::kOnOrbit);
    worst = std::max(worst, hs_norm(orbit_action(u, a.matrix()) - x));
  }
  report(11, "Cross-section contract", identity_exact && worst <= 1e-9,
         fmt("phi_a(a) == I exactly: %s; max |pi_a(phi_a(x)) - x|_2 %.3e (<= 1e-9)", identity_exact ? "yes" : "no", worst));
}

void coincidence_witness() {
  auto rng = rng_for(12);
  double unit = 0.0, conj = 0.0, support = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = kDims[k % kDims.size()];
    const Eigen::Index rank = sampling::uniform_index(rng, 1, n / 2);
    const Matrix basis = sampling::unitary(rng, n);
    RealVector values = RealVector::Zero(n);
    for (Eigen::Index j = 0; j < rank; ++j) values(n - 1 - j) = 1.0 + j;
    const FiniteSpectrumHermitian a =
        FiniteSpectrumHermitian::from_matrix(hermitize(basis * values.cast<Complex>().asDiagonal() * basis.adjoint()));
    const Matrix g = sampling::unitary(rng, n);
    const CoincidenceWitness w = orbits_coincide_witness(a, g);
    const Matrix u = w.u.realize();
    const Matrix pt = w.support * w.support.adjoint();
    unit = std::max(unit, hs_norm(u.adjoint() * u - identity(n)));
    conj = std::max(conj, hs_norm(orbit_action(u, a.matrix()) - orbit_action(g, a.matrix())));
    support = std::max(support, hs_norm(w.u.part() - pt * w.u.part() * pt));
  }
  report(12, "Orbit-coincidence witness", unit <= 1e-10 && conj <= 1e-9 && support <= 1e-10,
         fmt("unitarity %.3e (<= 1e-10), conjugation %.3e (<= 1e-9), off-support %.3e", unit, conj, support));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(const std::string& cli, const std::string& dir) {
  const std::string a = dir + "/acceptance_a.csv", b = dir + "/acceptance_b.csv";
  const auto t0 = Clock::now();
  const int first = std::system((cli + " check all --seed 2024 --out " + a + " > /dev/null 2>&1").c_str());
  const double elapsed = seconds_since(t0);
  const int second = std::system((cli + " check all --seed 2024 --out " + b + " > /dev/null 2>&1").c_str());
  const std::string ca = slurp(a), cb = slurp(b);
  const bool same = !ca.empty() && ca == cb;
  report(13, "Determinism", same && first == 0 && second == 0 && elapsed < 300.0,
         fmt("identical CSV bytes: %s (%zu bytes); full suite %.2f s (< 300 s); exit codes %d/%d", same ? "yes" : "no", ca.size(),
             elapsed, first, second));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "orbitgeo";
  const std::string dir = argc > 2 ? argv[2] : ".";
  geodesic_correctness();
  exp_log_inversion();
  isometry();
  curvature_sign();
  emi_segal();
  leaf_convexity();
  dichotomy();
  codiagonal_geodesics();
  orbit_length_formula();
  orbit_surjectivity();
  cross_section_contract();
  coincidence_witness();
  determinism(cli, dir);
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
