#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(FRACTAL_SPECTRA_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("dims emits the dimension family as valid JSON") {
  const RunResult r = run_cli("dims");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["walk_dimension"] == 3.0);
  CHECK(j["delta"] == 1.5);
  CHECK(j["hausdorff_dimension"] == 1.5);
  CHECK(j["spectral_dimension"] == 1.0);
  CHECK(j["energy_scaling_factor"] == 8.0);
  CHECK(j["einstein_residual"] == 0.0);
  const std::vector<double> times = j["crossing_times"];
  CHECK(times == std::vector<double>{64, 63, 60, 55, 48, 39, 28, 15});
  CHECK(j["resistance_metric_exponent"]["measure_1_16_resistance_1_8"].get<double>() ==
        Catch::Approx(4.0 / 3.0));
  CHECK(j["resistance_metric_exponent"]["measure_1_4_resistance_1_8"].get<double>() ==
        Catch::Approx(2.0 / 3.0));
}

TEST_CASE("spectrum table has one row per eigenvalue") {
  const RunResult r = run_cli("spectrum --m 1");
  REQUIRE(r.exit_code == 0);
  CHECK(count_lines(r.out) == 8);  // header + 7 rows
  CHECK(r.out.find("lambda,multiplicity,origin,genealogy,continuous_estimate") == 0);
  CHECK(r.out.find("forbidden") != std::string::npos);

  const RunResult ren = run_cli("spectrum --m 2 --renormalized");
  REQUIRE(ren.exit_code == 0);
  CHECK(count_lines(ren.out) == 64);
  // smallest renormalized value trends toward pi^2
  std::istringstream is(ren.out);
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(std::stod(first.substr(0, first.find(','))) == Catch::Approx(9.85).margin(0.05));
}

TEST_CASE("decimate oracle check gates on the tolerance") {
  const RunResult ok = run_cli("decimate --check-oracle --m 2");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("max |dev|") != std::string::npos);
  const RunResult strict = run_cli("decimate --check-oracle --m 2 --tolerance 1e-30");
  CHECK(strict.exit_code == 2);
}

TEST_CASE("oracle subcommand emits CSV spectra") {
  const RunResult r = run_cli("oracle --m 1 --bc dirichlet");
  REQUIRE(r.exit_code == 0);
  CHECK(count_lines(r.out) == 8);
  const RunResult n = run_cli("oracle --m 1 --bc neumann --vectors");
  REQUIRE(n.exit_code == 0);
  CHECK(count_lines(n.out) == 10);  // header + 9 rows
  CHECK(n.out.find("residual") != std::string::npos);
}

TEST_CASE("harmonic prints the interior coefficient table") {
  const RunResult r = run_cli("harmonic --a 1 --b 0 --m 1");
  REQUIRE(r.exit_code == 0);
  CHECK(count_lines(r.out) == 8);
  CHECK(r.out.find("0.875") != std::string::npos);
}

TEST_CASE("energy respects the normalization flag") {
  const auto raw = nlohmann::json::parse(run_cli("energy --m 1 --norm raw").out);
  CHECK(raw["energy"].get<double>() == Catch::Approx(0.125));
  const auto cons = nlohmann::json::parse(run_cli("energy --m 3 --norm conserved").out);
  CHECK(cons["energy"].get<double>() == Catch::Approx(1.0));
  const auto geo = nlohmann::json::parse(run_cli("energy --m 1 --norm geometric").out);
  CHECK(geo["energy"].get<double>() == Catch::Approx(64.0));
  CHECK(run_cli("energy --m 1 --norm bogus").exit_code == 3);
}

TEST_CASE("walk simulation is reproducible and reports its target") {
  const RunResult a = run_cli("walk --simulate --trials 5000 --seed 42");
  const RunResult b = run_cli("walk --simulate --trials 5000 --seed 42");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["analytic_target"] == 64.0);
  CHECK(j["trials"] == 5000);

  const auto analytic = nlohmann::json::parse(run_cli("walk").out);
  CHECK(analytic["crossing_times"][0] == "64");
}

TEST_CASE("structure reports residual and fitted map") {
  const RunResult r = run_cli("structure --variant island --samples 25");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["max_identity_residual"].get<double>() <= 1e-9);
  CHECK(j["k_d_zero"].get<double>() == Catch::Approx(0.125));
  CHECK(j["fitted_degree"] == 8);
  CHECK(j["bridge"]["scale"].get<double>() == Catch::Approx(2.0));
}

TEST_CASE("eigenfunction SVG output is deterministic") {
  namespace fsys = std::filesystem;
  const fsys::path dir = fsys::temp_directory_path();
  const fsys::path f1 = dir / "eig_a.svg", f2 = dir / "eig_b.svg";
  REQUIRE(run_cli("eigenfunction --m 1 --index 4 --out " + f1.string()).exit_code == 0);
  REQUIRE(run_cli("eigenfunction --m 1 --index 4 --out " + f2.string()).exit_code == 0);
  const std::string svg = slurp(f1);
  CHECK(svg == slurp(f2));
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  // 9 points for the level-1 path, endpoints pinned to the axis midline
  const std::size_t pts = svg.find("points=\"");
  REQUIRE(pts != std::string::npos);
  const std::string coords = svg.substr(pts + 8, svg.find('"', pts + 8) - pts - 8);
  CHECK(std::count(coords.begin(), coords.end(), ',') == 9);
  CHECK(coords.find("20.0000,200.0000") == 0);  // Dirichlet zero at the left edge

  // index 4 at level 1 is lambda = 2 with the alternating vector
  // (-1, 0, 1, 0, -1, 0, 1): interior odd positions sit on the midline and
  // even positions hit the frame extremes with alternating sign
  std::vector<double> ys;
  std::istringstream cs(coords);
  std::string pair;
  while (std::getline(cs, pair, ' '))
    ys.push_back(std::stod(pair.substr(pair.find(',') + 1)));
  REQUIRE(ys.size() == 9);
  CHECK(ys.front() == 200.0);
  CHECK(ys.back() == 200.0);
  for (std::size_t i : {2u, 4u, 6u}) CHECK(ys[i] == 200.0);
  for (std::size_t i : {1u, 3u, 5u, 7u}) {
    CHECK(std::fabs(ys[i] - 200.0) == 180.0);
    if (i >= 3) CHECK((ys[i] - 200.0) * (ys[i - 2] - 200.0) < 0.0);
  }

  CHECK(run_cli("eigenfunction --m 1 --index 99 --out " + f1.string()).exit_code == 3);
  fsys::remove(f1);
  fsys::remove(f2);
}

TEST_CASE("csv flags write the tables to files") {
  namespace fsys = std::filesystem;
  const fsys::path p = fsys::temp_directory_path() / "spec_m2.csv";
  REQUIRE(run_cli("spectrum --m 2 --csv " + p.string()).exit_code == 0);
  const std::string body = slurp(p);
  CHECK(count_lines(body) == 64);
  CHECK(body.find("lambda,multiplicity") == 0);
  fsys::remove(p);
}

TEST_CASE("graph export matches the documented schema") {
  const RunResult r = run_cli("graph --m 1");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("index,x_num,x_den,y_num,y_den,is_boundary") == 0);
  CHECK(count_lines(r.out) == 10);
}

TEST_CASE("level cap env var gates expensive levels") {
  const std::string cmd = "FRACTAL_SPECTRA_LEVEL_CAP=2 " + std::string(FRACTAL_SPECTRA_CLI_PATH);
  RunResult r;
  FILE* pipe = popen((cmd + " spectrum --m 3 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  CHECK(r.exit_code == 3);
}

TEST_CASE("reproduce-all runs selected checks and honors fault injection") {
  const RunResult ok = run_cli("reproduce-all --only 1 2 5");
  REQUIRE(ok.exit_code == 0);
  CHECK(ok.out.find("PASS  [1]") != std::string::npos);
  CHECK(ok.out.find("PASS  [2]") != std::string::npos);
  CHECK(ok.out.find("PASS  [5]") != std::string::npos);
  CHECK(ok.out.find("[4]") == std::string::npos);

  const RunResult bad = run_cli("reproduce-all --only 5 --inject-decimation-defect");
  CHECK(bad.exit_code == 2);
  CHECK(bad.out.find("FAIL  [5]") != std::string::npos);
}

TEST_CASE("usage errors exit with code 3") {
  CHECK(run_cli("no-such-command").exit_code == 3);
  CHECK(run_cli("spectrum --m 99").exit_code == 3);
  CHECK(run_cli("").exit_code == 3);
}
