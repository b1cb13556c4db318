// orbitgeo: command-line front end for the geometry library and its checks.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "orbitgeo/check.hpp"
#include "orbitgeo/io.hpp"

namespace {

using namespace orbitgeo;
using io::json;

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kParse = 2,
  kPositivity = 3,
  kOffOrbit = 4,
  kNotProjector = 5,
};

// Maps library errors onto the documented exit codes.
int exit_code(const Error& e) {
  if (dynamic_cast<const NotProjector*>(&e)) return kNotProjector;
  if (dynamic_cast<const OffOrbit*>(&e) || dynamic_cast<const NeighborhoodError*>(&e) || dynamic_cast<const NotTangent*>(&e)) {
    return kOffOrbit;
  }
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const SingularOperator*>(&e)) return kPositivity;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const NotHermitian*>(&e) || dynamic_cast<const DimensionMismatch*>(&e) ||
      dynamic_cast<const NotUnitary*>(&e) || dynamic_cast<const NotCodiagonal*>(&e)) {
    return kParse;
  }
  return kCheckFailed;
}

void emit(const json& j, const std::string& out) {
  const std::string text = io::dump(j) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out);
  if (!file) throw ParseError("cannot write '" + out + "'");
  file << text;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("cannot read number '" + item + "'");
    }
  }
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

Matrix hermitian_file(const std::string& path) { return io::hermitian_from_json(io::read_file(path)).realize(); }

json orbit_result(const OrbitPoint& p, double drift, double commutation) { return io::to_json(p, drift, commutation); }

int cmd_geodesic(const std::string& pf, const std::string& qf, const std::string& ts, const std::string& out) {
  const PositivePoint p = io::positive_from_json(io::read_file(pf));
  const PositivePoint q = io::positive_from_json(io::read_file(qf));
  json points = json::array();
  for (double t : parse_list(ts)) points.push_back({{"t", t}, {"point", io::to_json(geodesic(p, q, t).value())}});
  emit(points, out);
  return kOk;
}

int cmd_dist(const std::string& pf, const std::string& qf) {
  const PositivePoint p = io::positive_from_json(io::read_file(pf));
  const PositivePoint q = io::positive_from_json(io::read_file(qf));
  fmt::print("{:.12g}\n", distance(p, q));
  return kOk;
}

int cmd_orbit(const std::string& sub, const std::string& first, const std::string& second, bool on_orbit, const std::string& out) {
  if (sub == "exp") {
    const OrbitPoint p = io::orbit_point_from_json(io::read_file(first));
    const Matrix v = hermitian_file(second);
    const Matrix h = orbit_generator(p, v);
    const OrbitPoint e = orbit_geodesic(p, h, 1.0);
    json j = orbit_result(e, spectrum_drift(e), hs_norm(orbit_velocity(p, h) - v));
    j["h"] = io::matrix_to_json(h);
    emit(j, out);
  } else if (sub == "log") {
    const OrbitPoint p = io::orbit_point_from_json(io::read_file(first));
    const OrbitPoint q = io::orbit_point_from_json(io::read_file(second));
    const OrbitLog log = orbit_log(p, q);
    json j = orbit_result(orbit_geodesic(p, log.h, 1.0), log.spectrum_drift, log.commutation);
    j["h"] = io::matrix_to_json(log.h);
    j["v"] = io::matrix_to_json(orbit_velocity(p, log.h));
    j["non_unique"] = log.non_unique;
    emit(j, out);
  } else if (sub == "length") {
    const OrbitPoint p = io::orbit_point_from_json(io::read_file(first));
    require_projector_base(p, "orbit length");
    const double length = orbit_length(p.base().projector(), hermitian_file(second));
    emit({{"length", length}}, out);
  } else if (sub == "section") {
    const FiniteSpectrumHermitian a = FiniteSpectrumHermitian::from_matrix(hermitian_file(first));
    const Matrix x = hermitian_file(second);
    const Matrix u = cross_section(a, x, on_orbit ? SectionMode::kOnOrbit : SectionMode::kNeighborhood);
    const double residual = hs_norm(orbit_action(u, a.matrix()) - x);
    emit({{"u", io::matrix_to_json(u)},
          {"certificates", {{"section_residual", residual}, {"spectrum_drift", spectrum_drift(x, a.spectrum())}}}},
         out);
  } else if (sub == "witness") {
    const FiniteSpectrumHermitian a = FiniteSpectrumHermitian::from_matrix(hermitian_file(first));
    const Matrix g = io::operator_from_json(io::read_file(second)).realize();
    const CoincidenceWitness w = orbits_coincide_witness(a, g);
    const Matrix u = w.u.realize();
    const double conj = hs_norm(orbit_action(u, a.matrix()) - orbit_action(g, a.matrix()));
    emit({{"u", io::to_json(w.u)},
          {"support_dim", w.support.cols()},
          {"certificates", {{"conjugation", conj}, {"unitarity", hs_norm(u.adjoint() * u - identity(a.dim()))}}}},
         out);
  } else {
    throw ParseError("unknown orbit subcommand '" + sub + "'");
  }
  return kOk;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("ORBITGEO_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("ORBITGEO_SEED is not an unsigned integer: '") + s + "'");
  }
}

int cmd_check(const std::string& suite, check::SuiteConfig config, bool seed_given, const std::string& dims,
              const std::vector<std::string>& tols, const std::string& out) {
  if (!seed_given) config.seed = env_seed();
  if (!dims.empty()) {
    config.dims.clear();
    for (double d : parse_list(dims)) {
      if (d != static_cast<double>(static_cast<Eigen::Index>(d))) throw ParseError("dimensions must be integers");
      config.dims.push_back(static_cast<Eigen::Index>(d));
    }
  }
  for (const std::string& item : tols) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("--tol expects <suite>=<value>, got '" + item + "'");
    const std::vector<double> value = parse_list(item.substr(eq + 1));
    if (value.size() != 1) throw ParseError("--tol expects a single value in '" + item + "'");
    config.tolerances[item.substr(0, eq)] = value.front();
  }
  try {
    check::validate(config);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  if (!check::is_suite_name(suite)) throw ParseError("unknown suite '" + suite + "'");

  const check::Report report = check::run(suite, config);

  std::ostream* summary = &std::cout;
  if (out.empty()) {
    check::write_csv(std::cout, report);
    summary = &std::cerr;
  } else {
    std::ofstream file(out);
    if (!file) throw ParseError("cannot write '" + out + "'");
    check::write_csv(file, report);
  }
  for (const check::SuiteTiming& t : report.timings) fmt::print(*summary, "suite {:<10} {:8.2f} s\n", t.suite, t.seconds);
  for (const auto& [name, value] : report.max_residuals()) fmt::print(*summary, "  max {:<28} {:.3e}\n", name, value);
  fmt::print(*summary, "rows {}  passed {}  failed {}\n", report.rows.size(), report.passed(), report.failed());
  if (report.ok()) return kOk;
  for (const check::Row* r : report.failures()) {
    fmt::print(std::cerr, "FAIL {} trial {} seed {} dim {} residual {} tolerance {}\n", r->suite, r->trial, r->seed, r->dim,
               check::csv_number(r->residual), check::csv_number(r->tolerance));
  }
  return kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of positive unitized operators and their unitary orbits"};
  app.require_subcommand(1);
  std::string out;

  std::string pf, qf, ts = "0.5";
  auto* geo = app.add_subcommand("geodesic", "points of the geodesic from p to q");
  geo->add_option("p", pf, "positive operator file")->required();
  geo->add_option("q", qf, "positive operator file")->required();
  geo->add_option("--t", ts, "comma separated parameters");
  geo->add_option("--out", out, "write JSON here instead of stdout");

  auto* dist = app.add_subcommand("dist", "geodesic distance");
  dist->add_option("p", pf)->required();
  dist->add_option("q", qf)->required();

  std::string sub, first, second;
  bool on_orbit = false;
  auto* orb = app.add_subcommand("orbit", "orbit exp | log | length | section | witness");
  orb->add_option("subcommand", sub)->required()->check(CLI::IsMember({"exp", "log", "length", "section", "witness"}));
  orb->add_option("first", first, "point, base or a file")->required();
  orb->add_option("second", second, "tangent, point, h, x or g file")->required();
  orb->add_flag("--on-orbit", on_orbit, "section: require spectrum(x) == spectrum(a)");
  orb->add_option("--out", out);

  std::string suite = "all", dims;
  std::vector<std::string> tols;
  check::SuiteConfig config;
  auto* chk = app.add_subcommand("check", "run property suites and write a CSV report");
  chk->add_option("suite", suite, "metric, geodesic, curvature, emi, segal, orbit, cartan, section or all");
  auto* seed_opt = chk->add_option("--seed", config.seed, "RNG seed (fallback: ORBITGEO_SEED)");
  chk->add_option("--trials", config.trials, "trials per dimension");
  chk->add_option("--dims", dims, "comma separated dimensions");
  chk->add_option("--tol", tols, "<suite>=<value> or <suite.check>=<value>");
  chk->add_option("--out", out, "CSV path (default stdout)");
  chk->add_option("--step", config.step, "finite difference step");
  chk->add_option("--jobs", config.jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*geo) return cmd_geodesic(pf, qf, ts, out);
    if (*dist) return cmd_dist(pf, qf);
    if (*orb) return cmd_orbit(sub, first, second, on_orbit, out);
    return cmd_check(suite, config, seed_opt->count() > 0, dims, tols, out);
  } catch (const Error& e) {
    fmt::print(std::cerr, "orbitgeo: {}\n", e.what());
    return exit_code(e);
  }
}
