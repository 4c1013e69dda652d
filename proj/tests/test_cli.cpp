#include <cstdio>
#include <fstream>
#include <sstream>

#include "curvlab/report.hpp"
#include "doctest.h"

using namespace curvlab;
using namespace curvlab::report;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSphereVerify = R"(
[ambient]
type = space_form
delta = 0.0

[surface]
family = sphere
rho = 1.0

[grid]
n = 2
degree = 16

[check]
r = 2
tol = 1e-6
)";

const char* kSweep = R"(
[ambient]
type = space_form
delta = 0.0

[surface]
family = perturbed_sphere
rho = 1.0
amplitude = 0.01
harmonic = x1*x2*x3

[grid]
n = 2
degree = 20

[weingarten]
r = 2
a = 0.5

[cn]
samples = 20000
seed = 42

[sweep]
t_values = 3e-2, 1e-2, 3e-3
)";

}  // namespace

TEST_CASE("config parser handles sections, comments and rejects malformed input") {
  const auto cfg = parse_config_text(
      "# comment\n[ambient]\ntype = space_form\ndelta = -1.0 # trailing\n\n"
      "[grid]\nn = 2\ndegree= 24\nflag = true\nlist = 1.0, 2.5, -3\n");
  CHECK(cfg.require_string("ambient.type") == "space_form");
  CHECK(cfg.get_real("ambient.delta", 0.0) == doctest::Approx(-1.0));
  CHECK(cfg.get_int("grid.degree", 0) == 24);
  CHECK(cfg.get_bool("grid.flag", false));
  CHECK(cfg.get_list("grid.list", {}) == std::vector<double>{1.0, 2.5, -3.0});
  CHECK(cfg.get_string("missing.key", "dflt") == "dflt");

  CHECK_THROWS_AS(cfg.require_string("missing.key"), ConfigError);
  CHECK_THROWS_AS(cfg.get_real("ambient.type", 0.0), ConfigError);
  CHECK_THROWS_AS(parse_config_text("key = 1\n"), ConfigError);       // no section
  CHECK_THROWS_AS(parse_config_text("[a]\nnovalue\n"), ConfigError);  // no '='
  CHECK_THROWS_AS(parse_config_text("[a\nk = 1\n"), ConfigError);     // unterminated
  CHECK_THROWS_AS(parse_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("polynomial parser covers the documented grammar") {
  const auto p = parse_polynomial("x1*x2*x3", 3);
  REQUIRE(p.size() == 1);
  CHECK(p[0].coeff == doctest::Approx(1.0));
  CHECK(p[0].powers == std::vector<int>{1, 1, 1});

  const auto q = parse_polynomial("1 + 0.5*x1^2 - 2*x2", 3);
  REQUIRE(q.size() == 3);
  CHECK(q[0].powers == std::vector<int>{0, 0, 0});
  CHECK(q[1].coeff == doctest::Approx(0.5));
  CHECK(q[1].powers == std::vector<int>{2, 0, 0});
  CHECK(q[2].coeff == doctest::Approx(-2.0));

  CHECK_THROWS_AS(parse_polynomial("x4", 3), ConfigError);
  CHECK_THROWS_AS(parse_polynomial("", 3), ConfigError);
  CHECK_THROWS_AS(parse_polynomial("x1 +", 3), ConfigError);
}

TEST_CASE("verify command passes on the round sphere") {
  const auto cfg = parse_config_text(kSphereVerify);
  auto rep = cmd_verify(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.body["all_pass"].get<bool>());
  REQUIRE(rep.body.contains("checks"));
  for (const auto& j : rep.body["checks"]) {
    if (j.contains("verdict")) CHECK(j["verdict"].get<bool>());
  }
}

TEST_CASE("verify command reports failure through the exit code") {
  // tolerance far below the quadrature floor of a coarse grid on a wiggly
  // surface forces an honest identity failure
  std::string text = kSphereVerify;
  auto cfg = parse_config_text(
      "[ambient]\ntype = space_form\ndelta = 0.0\n"
      "[surface]\nfamily = perturbed_sphere\nrho = 1.0\namplitude = 0.2\n"
      "harmonic = x1^5*x2^4*x3\n"
      "[grid]\nn = 2\ndegree = 8\n[check]\nr = 2\ntol = 1e-15\n");
  auto rep = cmd_verify(cfg);
  CHECK(rep.exit_code == 1);
  CHECK_FALSE(rep.body["all_pass"].get<bool>());
}

TEST_CASE("report writing is byte deterministic apart from the timestamp") {
  const auto cfg = parse_config_text(kSweep);
  auto r1 = cmd_sweep(cfg);
  auto r2 = cmd_sweep(cfg);
  CHECK(r1.exit_code == 0);
  CHECK(r1.body == r2.body);
  CHECK(r1.csv == r2.csv);
  CHECK(content_hash(r1.body) == content_hash(r2.body));

  write_report(r1, "/tmp/curvlab_rep_a");
  write_report(r2, "/tmp/curvlab_rep_b");
  auto j1 = nlohmann::json::parse(slurp("/tmp/curvlab_rep_a/report.json"));
  auto j2 = nlohmann::json::parse(slurp("/tmp/curvlab_rep_b/report.json"));
  CHECK(j1["meta"]["content_hash"] == j2["meta"]["content_hash"]);
  CHECK(j1["meta"]["version"] == "0.1.0");
  j1["meta"].erase("timestamp");
  j2["meta"].erase("timestamp");
  CHECK(j1 == j2);
  CHECK(slurp("/tmp/curvlab_rep_a/sweep.csv") == slurp("/tmp/curvlab_rep_b/sweep.csv"));
}

TEST_CASE("sweep CSV carries full-precision decimal columns") {
  const auto cfg = parse_config_text(kSweep);
  auto rep = cmd_sweep(cfg);
  REQUIRE(!rep.csv.empty());
  std::istringstream ss(rep.csv);
  std::string header;
  std::getline(ss, header);
  CHECK(header.substr(0, 2) == "t,");
  int rows = 0;
  for (std::string line; std::getline(ss, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);
  CHECK(format_csv_value(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_csv_value(2.0) == "2");
}

TEST_CASE("changing the seed changes the sampled certificate but not the verdict") {
  auto cfg = parse_config_text(kSweep);
  auto base = cmd_sweep(cfg);
  cfg.values["cn.seed"] = "7";
  auto other = cmd_sweep(cfg);
  CHECK(base.exit_code == 0);
  CHECK(other.exit_code == 0);
  CHECK(base.body["cn"]["raw_infimum"] != other.body["cn"]["raw_infimum"]);
}

TEST_CASE("aniso command certifies the Wulff reduction end to end") {
  auto cfg = parse_config_text(
      "[ambient]\ntype = space_form\ndelta = 0.0\n"
      "[surface]\nfamily = sphere\nrho = 1.0\n"
      "[grid]\nn = 2\ndegree = 20\n"
      "[aniso]\nfamily = ellipsoidal\naxes = 1.3, 1.0, 0.8\n"
      "t_values = 1e-2, 3e-3, 1e-3\n");
  auto rep = cmd_aniso(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.body["all_pass"].get<bool>());
  CHECK(rep.body["convexity_margin"].get<double>() > 0.0);
  REQUIRE(!rep.csv.empty());
}

TEST_CASE("geometry builder rejects inconsistent configurations") {
  CHECK_THROWS_AS(build_geometry(parse_config_text(
                      "[ambient]\ntype = nonsense\n[grid]\nn = 2\ndegree = 16\n")),
                  ConfigError);
  CHECK_THROWS_AS(build_geometry(parse_config_text(
                      "[ambient]\ntype = space_form\ndelta = 0\n"
                      "[surface]\nfamily = ellipsoid\naxes = 1.0, 2.0\n"
                      "[grid]\nn = 2\ndegree = 16\n")),
                  ConfigError);
  CHECK_THROWS_AS(build_family(parse_config_text(
                      "[ambient]\ntype = space_form\ndelta = 0\n"
                      "[surface]\nfamily = sphere\nrho = 1.0\n"
                      "[grid]\nn = 2\ndegree = 16\n")),
                  ConfigError);
}
