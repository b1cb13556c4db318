#include "test_support.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "orbitgeo/io.hpp"

namespace orbitgeo {
namespace {

using io::json;
using testing::diag;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + ORBITGEO_CLI + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(ORBITGEO_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp(const std::string& name) { return ::testing::TempDir() + "orbitgeo_cli_" + name; }

Matrix realized(const json& j) { return io::operator_from_json(j).realize(); }

Matrix orbit_realization(const json& j) {
  const Matrix g = realized(j["g"]);
  return g * hermitian_exp(realized(j["base"])) * g.adjoint();
}

TEST(Cli, GeodesicPoints) {
  const CliRun echo = run("geodesic " + data("identity.json") + " " + data("diag41.json") + " --t 0");
  ASSERT_EQ(echo.code, 0);
  const json one = json::parse(echo.out);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(testing::matrices_near(realized(one[0]["point"]), identity(2), 1e-15));

  const CliRun mid = run("geodesic " + data("identity.json") + " " + data("diag41.json") + " --t 0,0.5,1");
  ASSERT_EQ(mid.code, 0);
  const json pts = json::parse(mid.out);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_TRUE(testing::matrices_near(realized(pts[1]["point"]), diag({2.0, 1.0}), 1e-14));
  EXPECT_TRUE(testing::matrices_near(realized(pts[2]["point"]), diag({4.0, 1.0}), 1e-10));
}

TEST(Cli, Distance) {
  EXPECT_EQ(run("dist " + data("diag41.json") + " " + data("diag41.json")).out, "0\n");
  EXPECT_EQ(run("dist " + data("identity.json") + " " + data("e_scalar.json")).out, "1\n");
  const CliRun ab = run("dist " + data("identity.json") + " " + data("diag41.json"));
  EXPECT_EQ(ab.out, run("dist " + data("diag41.json") + " " + data("identity.json")).out);
  EXPECT_EQ(ab.out, "2.77258872224\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("dist " + data("broken.json") + " " + data("identity.json")).code, 2);
  EXPECT_EQ(run("dist " + data("missing.json") + " " + data("identity.json")).code, 2);
  EXPECT_EQ(run("dist " + data("not_hermitian.json") + " " + data("identity.json")).code, 2);
  EXPECT_EQ(run("geodesic " + data("not_positive.json") + " " + data("identity.json")).code, 3);
  EXPECT_EQ(run("dist --bogus").code, 2);
  EXPECT_EQ(run("geodesic " + data("identity.json") + " " + data("diag41.json") + " --t 0.5,x").code, 2);
  EXPECT_EQ(run("orbit exp " + data("orbit_generic.json") + " " + data("zero_tangent.json")).code, 5);
  EXPECT_EQ(run("orbit log " + data("orbit_generic.json") + " " + data("orbit_generic.json")).code, 5);
  EXPECT_EQ(run("orbit exp " + data("orbit_p.json") + " " + data("normal_tangent.json")).code, 4);
  EXPECT_EQ(run("orbit log " + data("orbit_p3.json") + " " + data("orbit_far_rank.json")).code, 4);
  EXPECT_EQ(run("orbit section " + data("section_a.json") + " " + data("section_far.json")).code, 4);
  EXPECT_EQ(run("orbit section " + data("section_a.json") + " " + data("diag41.json") + " --on-orbit").code, 4);
  EXPECT_EQ(run("check nosuch --trials 1").code, 2);
  EXPECT_EQ(run("check emi --trials 0").code, 2);
  EXPECT_EQ(run("check emi --dims 1,2").code, 2);
  EXPECT_EQ(run("check emi --tol emi=0").code, 2);
  EXPECT_EQ(run("check emi --trials 1", "ORBITGEO_SEED=abc").code, 2);
}

TEST(Cli, OrbitExpZeroTangent) {
  const CliRun r = run("orbit exp " + data("orbit_p.json") + " " + data("zero_tangent.json"));
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_TRUE(testing::matrices_near(orbit_realization(j), diag({2.0, 1.0}), 1e-14));
  EXPECT_LE(j["certificates"]["spectrum_drift"].get<double>(), 1e-10);
  EXPECT_LE(j["certificates"]["commutation"].get<double>(), 1e-10);
}

TEST(Cli, OrbitLogThenExp) {
  const CliRun log = run("orbit log " + data("orbit_p.json") + " " + data("orbit_q.json"));
  ASSERT_EQ(log.code, 0);
  const json lj = json::parse(log.out);
  EXPECT_LT(lj["certificates"]["commutation"].get<double>(), 1e-8);
  const std::string vfile = temp("v.json");
  std::ofstream(vfile) << io::dump(lj["v"]);

  const CliRun exp = run("orbit exp " + data("orbit_p.json") + " " + vfile);
  ASSERT_EQ(exp.code, 0);
  const Matrix q = orbit_realization(io::read_file(data("orbit_q.json")));
  EXPECT_LE(hs_norm(orbit_realization(json::parse(exp.out)) - q), 1e-7);

  const std::string hfile = temp("h.json");
  std::ofstream(hfile) << io::dump(lj["h"]);
  const CliRun len = run("orbit length " + data("orbit_p.json") + " " + hfile);
  ASSERT_EQ(len.code, 0);
  EXPECT_NEAR(json::parse(len.out)["length"].get<double>(), 1.0, 1e-12);  // 2 * rotation angle
}

TEST(Cli, SectionAndWitness) {
  const CliRun s = run("orbit section " + data("section_a.json") + " " + data("section_x.json") + " --on-orbit");
  ASSERT_EQ(s.code, 0);
  EXPECT_LE(json::parse(s.out)["certificates"]["section_residual"].get<double>(), 1e-9);

  const CliRun w = run("orbit witness " + data("witness_a.json") + " " + data("witness_g_commuting.json"));
  ASSERT_EQ(w.code, 0);
  const json wj = json::parse(w.out);
  EXPECT_LE(hs_norm(io::operator_from_json(wj["u"]).part()), 1e-12);

  const CliRun r = run("orbit witness " + data("witness_a.json") + " " + data("witness_g_rotation.json"));
  ASSERT_EQ(r.code, 0);
  const json rj = json::parse(r.out);
  EXPECT_EQ(rj["support_dim"].get<int>(), 2);
  EXPECT_LE(rj["certificates"]["conjugation"].get<double>(), 1e-9);
}

TEST(Cli, CheckIsDeterministic) {
  const std::string a = temp("a.csv"), b = temp("b.csv"), c = temp("c.csv");
  ASSERT_EQ(run("check all --seed 42 --trials 1 --dims 2 --out " + a).code, 0);
  ASSERT_EQ(run("check all --seed 42 --trials 1 --dims 2 --out " + b).code, 0);
  ASSERT_EQ(run("check all --trials 1 --dims 2 --out " + c, "ORBITGEO_SEED=42").code, 0);
  const std::string first = slurp(a);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(b));
  EXPECT_EQ(first, slurp(c));
  EXPECT_EQ(first.substr(0, first.find('\n')), "suite,trial,seed,dim,residual,tolerance,pass");
}

TEST(Cli, CheckFailureExitsOne) {
  const CliRun r = run("check cartan --seed 1 --trials 2 --dims 2 --tol cartan.sigma_generic=1e6 --out " + temp("fail.csv"));
  EXPECT_EQ(r.code, 1);
}

}  // namespace
}  // namespace orbitgeo
