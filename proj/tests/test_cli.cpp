#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

const std::string kCli = DLSERIES_CLI_PATH;
const std::string kTmp = DLSERIES_TEST_TMPDIR;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& config,
                  const std::string& name) {
  std::string cfg_path = kTmp + "/cfg_" + name + ".json";
  std::string out_path = kTmp + "/out_" + name + ".json";
  {
    std::ofstream f(cfg_path);
    f << config;
  }
  std::string cmd = kCli + " " + args + " --config " + cfg_path + " --out " + out_path +
                    " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_path);
  if (f) {
    std::ostringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
  }
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("cli datum: named A1-sc validates clean") {
  auto r = run_cli("datum",
                   R"({"datum": {"family": "A", "rank": 1, "isogeny": "simply-connected"}})",
                   "datum_a1");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["violations"].empty());
  CHECK(j["report"]["num_roots"] == 2);
  CHECK(j["meta"]["root_order_version"] == "height-lex/1");
  CHECK(j["meta"]["config_hash"].get<std::string>().substr(0, 6) == "fnv1a:");
}

TEST_CASE("cli datum: explicit root lists") {
  auto r = run_cli("datum",
                   R"({"datum": {"rank": 2,
                       "roots": [[1,-1],[-1,1]], "coroots": [[1,-1],[-1,1]],
                       "simple": [0]}})",
                   "datum_explicit");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["violations"].empty());
}

TEST_CASE("cli series rat: SL2 flagship lists two rational series") {
  auto r = run_cli(
      "series rat",
      R"({"datum": {"family": "A", "rank": 1, "isogeny": "simply-connected"},
          "q": 3, "p": 3, "sheaf": ["1/2"]})",
      "series_sl2");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["series"].size() == 2);
  CHECK(j["report"]["series"][0]["omega_eps"].size() == 2);
  // groups come with element lists, a multiplication table and generators
  const auto& omega = j["report"]["geometric"]["little_groups"]["omega"];
  CHECK(omega["order"] == 2);
  CHECK(omega["table"].size() == 2);
  CHECK(omega["generators"].size() == 1);
  CHECK(omega["elements"][0].contains("perm"));
}

TEST_CASE("cli series geom with pi0 block") {
  auto r = run_cli(
      "series geom",
      R"({"datum": {"rank": 2, "torus": true}, "q": 3, "p": 3,
          "pi0": {"table": [[0,1],[1,0]],
                  "action": [{"matrix": [[1,0],[0,1]]}, {"matrix": [[0,1],[1,0]]}]},
          "sheaf": ["1/2", "0"]})",
      "series_disc");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["predicted_simple_count"] == 1);
  CHECK(j["report"]["w0_orbits_in_wl"] == 2);
}

TEST_CASE("cli compare: SL2/q3 vs PGL2(F3) matches 4 = 4") {
  auto r = run_cli(
      "compare",
      R"({"datum": {"family": "A", "rank": 1, "isogeny": "simply-connected"},
          "q": 3, "census": {"family": "PGL", "n": 2, "q": 3}})",
      "compare_sl2");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["match"] == true);
  CHECK(j["report"]["predicted_total"] == 4);
  CHECK(j["report"]["census_total"] == 4);
}

TEST_CASE("cli census") {
  auto r = run_cli("census", R"({"census": {"family": "GL", "n": 2, "q": 2}})", "census_gl2");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["rational_class_count"] == 2);
}

TEST_CASE("cli embed with extension") {
  auto r = run_cli(
      "embed",
      R"({"datum": {"family": "A", "rank": 1, "isogeny": "simply-connected"},
          "p": 3, "sheaf": ["1/2"]})",
      "embed_sl2");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["big_lattice_torsion"].empty());
  CHECK(j["report"]["extension"]["omega_upstairs_order"] == 1);
}

TEST_CASE("cli sweep runs the identity suite") {
  auto r = run_cli("sweep",
                   R"({"sweep": {"types": [["A",1,"sc"], ["A",2,"ad"]],
                                 "taus": ["split","flip"], "qs": [2,3],
                                 "denominator_bound": 4}})",
                   "sweep_small");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["report"]["all_identities_hold"] == true);
  CHECK(j["report"]["total_orbit_cases"].get<long>() > 0);
  // flip rows only exist for A2
  int flip_rows = 0;
  for (const auto& c : j["report"]["configs"])
    if (c["config"].get<std::string>().find("flip") != std::string::npos) ++flip_rows;
  CHECK(flip_rows == 2);  // A2-ad flip at q=2 and q=3
}

TEST_CASE("cli exit codes: invalid input is 1") {
  auto r = run_cli("datum", R"({"datum": {"family": "Z", "rank": 1, "isogeny": "sc"}})",
                   "bad_family");
  CHECK(r.code == 1);
  auto r2 = run_cli("series rat",
                    R"({"datum": {"family": "A", "rank": 1, "isogeny": "simply-connected"},
                        "q": 2, "p": 2, "sheaf": ["1/2"]})",
                    "bad_p");
  CHECK(r2.code == 1);  // denominator divisible by p
}

TEST_CASE("cli reports are byte-identical across runs and parallelism") {
  const std::string cfg =
      R"({"sweep": {"types": [["A",2,"sc"]], "taus": ["split"], "qs": [2], "denominator_bound": 5}})";
  auto a = run_cli("sweep --jobs 1", cfg, "det_a");
  auto b = run_cli("sweep --jobs 4", cfg, "det_b");
  auto c = run_cli("sweep --jobs 1", cfg, "det_c");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  REQUIRE(c.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(!a.out.empty());
}

TEST_CASE("cli text rendering is derived from the same report") {
  auto cfg = R"({"datum": {"family": "A", "rank": 1, "isogeny": "gl"}})";
  auto j = run_cli("datum", cfg, "text_json");
  auto t = run_cli("datum --format text", cfg, "text_text");
  REQUIRE(j.code == 0);
  REQUIRE(t.code == 0);
  CHECK(t.out.find("root_order_version") != std::string::npos);
  CHECK(t.out.find('{') == std::string::npos);  // rendered, not JSON
}
