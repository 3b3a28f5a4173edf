#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "msm/cli.hpp"

using namespace msm;
using namespace msm::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "msm_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "msm");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return msm::cli::main(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

double cell(const std::string& s) {
  double x = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), x);
  return x;
}

}  // namespace

TEST_CASE("config grammar") {
  const auto s = parse_config_text("# model\nalpha = 0.2   # trailing comment\n\nq=0.3\ndist = weibull\nbeta = 0.5\n", "t");
  CHECK(s.at("alpha") == "0.2");
  CHECK(s.at("q") == "0.3");
  const auto c = build_config(s);
  CHECK(c.alpha() == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(c.d == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(c.distribution().kind == DistKind::Weibull);
  CHECK(parse_config_text("max_lag = 3", "t").count("max-lag") == 1);

  CHECK_THROWS_AS(parse_config_text("alpha 0.2", "t"), ParseError);
  CHECK_THROWS_AS(parse_config_text("colour = red", "t"), ParseError);
  CHECK_THROWS_AS(parse_config_text("q = 0.1\nq = 0.2", "t"), ParseError);
  CHECK_THROWS_AS(build_config({{"alpha", "0.2"}, {"d", "0.4"}}), ParseError);
  CHECK_THROWS_AS(build_config({{"alpha", "1.5"}}), ParseError);
  CHECK_THROWS_AS(build_config({{"q", "1.5"}}), ParseError);
  CHECK_THROWS_AS(build_config({{"mu", "2"}}), ParseError);
  CHECK_THROWS_AS(build_config({{"mu", "4x"}}), ParseError);
  CHECK_THROWS_AS(build_config({{"dist", "lognormal"}}), ParseError);
  CHECK_THROWS_AS(build_config({{"rel-tol", "-1"}}), ParseError);
  // d and alpha describe the same parameter
  CHECK(build_config({{"d", "0.3"}}).alpha() == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("grid syntax") {
  CHECK(parse_grid("1, 2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
  const auto l = parse_grid("0:1:5");
  REQUIRE(l.size() == 5);
  CHECK(l[2] == 0.5);
  const auto g = parse_grid("0.01:1000:6:log");
  REQUIRE(g.size() == 6);
  CHECK(g.front() == 0.01);
  CHECK(g.back() == 1000.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(parse_grid("3:3:1") == std::vector<double>{3.0});
  CHECK_THROWS_AS(parse_grid("0:1"), ParseError);
  CHECK_THROWS_AS(parse_grid("0:1:5:cubic"), ParseError);
  CHECK_THROWS_AS(parse_grid("0:1:5:log"), ParseError);
  CHECK_THROWS_AS(parse_grid("1,,2"), ParseError);
  CHECK_THROWS_AS(build_config({{"delta-grid", "-1,1"}}), ParseError);
}

TEST_CASE("number format round-trips with a dot") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1.0}) {
    const auto s = format_number(v);
    CHECK(s.find(',') == std::string::npos);
    CHECK(cell(s) == v);
  }
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(short_number(0.1) == "0.1");
  Table t;
  t.add("x", {1.0, 2.0});
  t.add("y", {0.5, -0.25});
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "x,y\n1,0.5\n2,-0.25\n");
  CHECK_THROWS(t.add("z", {1.0}));
}

TEST_CASE("noise at q = 1/2 is flat") {
  const auto out = scratch("noise.csv");
  REQUIRE(run({"noise", "--q", "0.5", "--alpha", "0.2", "--mu", "5", "--delta-grid", "0.01:1000:7:log", "--out",
               out.string()}) == kOk);
  const auto rows = read_csv(slurp(out));
  REQUIRE(rows.size() == 8);
  CHECK(rows[0] == std::vector<std::string>{"Delta", "S_Delta", "S"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(cell(rows[i][1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cell(rows[i][2]) == 1.0);
  }
}

TEST_CASE("reruns are byte-identical") {
  const auto a = scratch("sim_a.csv"), b = scratch("sim_b.csv"), c = scratch("sim_c.csv");
  REQUIRE(run({"simulate", "--T", "2000", "--seed", "5", "--q", "0.2", "--out", a.string()}) == kOk);
  REQUIRE(run({"simulate", "--T", "2000", "--seed", "5", "--q", "0.2", "--out", b.string()}) == kOk);
  REQUIRE(run({"simulate", "--T", "2000", "--seed", "6", "--q", "0.2", "--out", c.string()}) == kOk);
  const auto sa = slurp(a);
  CHECK(sa == slurp(b));
  CHECK(sa != slurp(c));
  CHECK(sa.rfind("t,r\n", 0) == 0);
  CHECK(sa.find('\r') == std::string::npos);

  for (const std::string fig : {"1", "4", "A2", "15"}) {
    const auto f1 = scratch("fig_" + fig + "_1.csv"), f2 = scratch("fig_" + fig + "_2.csv");
    REQUIRE(run({"figure", "--figure", fig, "--out", f1.string()}) == kOk);
    REQUIRE(run({"figure", "--figure", fig, "--threads", "3", "--out", f2.string()}) == kOk);
    CHECK(slurp(f1) == slurp(f2));
  }
}

TEST_CASE("figure tables") {
  const auto f1 = read_csv(slurp([] {
    const auto p = scratch("f1.csv");
    run({"--figure", "1", "--out", p.string()});
    return p;
  }()));
  CHECK(f1[0] == std::vector<std::string>{"m", "K_m(q=0.1)", "K_m(q=0.2)", "K_m(q=0.3)"});
  // K_1 for q = 0.1 and 0.3 differ by the bounce factor (1 - 2q)
  CHECK(cell(f1[2][3]) / cell(f1[2][1]) == doctest::Approx(0.4 / 0.8).epsilon(1e-12));

  const auto p15 = scratch("f15.csv");
  REQUIRE(run({"figure", "--figure", "15", "--out", p15.string()}) == kOk);
  const auto f15 = read_csv(slurp(p15));
  CHECK(f15[0] == std::vector<std::string>{"Delta", "S12(lambda=1)", "S12(lambda=2)", "S12(lambda=3)"});
  for (std::size_t i = 1; i < f15.size(); ++i) {
    CHECK(cell(f15[i][1]) > cell(f15[i][2]));
    CHECK(cell(f15[i][2]) > cell(f15[i][3]));
  }

  const auto pa2 = scratch("fa2.csv");
  REQUIRE(run({"figure", "--figure", "a2", "--out", pa2.string()}) == kOk);
  const auto fa2 = read_csv(slurp(pa2));
  CHECK(fa2[0] == std::vector<std::string>{"d", "rho_1"});
  const double d = cell(fa2[20][0]);
  CHECK(cell(fa2[20][1]) == doctest::Approx(d / (1.0 - d)).epsilon(1e-12));

  const auto p4 = scratch("f4.csv");
  REQUIRE(run({"figure", "--figure", "4", "--out", p4.string()}) == kOk);
  const auto f4 = read_csv(slurp(p4));
  REQUIRE(f4[0].size() == 4);
  for (std::size_t i = 2; i < f4.size(); ++i)
    for (int j = 1; j <= 3; ++j) CHECK(cell(f4[i][j]) > cell(f4[i - 1][j]));
  CHECK(figure_ids().size() == 17);
}

TEST_CASE("flags override the config file") {
  const auto cfg = scratch("run.cfg");
  {
    std::ofstream f(cfg);
    f << "# base run\nalpha = 0.3\nq = 0.5\nmu = 5\ndelta_grid = 1,10\n";
  }
  const auto o1 = scratch("cfg1.csv"), o2 = scratch("cfg2.csv");
  REQUIRE(run({"noise", "--config", cfg.string(), "--out", o1.string()}) == kOk);
  CHECK(cell(read_csv(slurp(o1))[1][2]) == 1.0);
  // q from the flag wins, and --d replaces the file's alpha
  REQUIRE(run({"noise", "--config", cfg.string(), "--q", "0.1", "--d", "0.45", "--out", o2.string()}) == kOk);
  const auto rows = read_csv(slurp(o2));
  REQUIRE(rows.size() == 3);
  CHECK(cell(rows[1][2]) == doctest::Approx(noise_strength(ModelParams::make(0.1, 0.1, 5.0))).epsilon(1e-12));
}

TEST_CASE("exit codes") {
  const auto o = scratch("err.csv");
  CHECK(run({"bogus"}) == kParse);
  CHECK(run({"noise", "--mu", "abc", "--out", o.string()}) == kParse);
  CHECK(run({"noise", "--alpha", "0.2", "--d", "0.1", "--out", o.string()}) == kParse);
  CHECK(run({"figure", "--figure", "13", "--out", o.string()}) == kParse);
  CHECK(run({"figure", "--out", o.string()}) == kParse);
  CHECK(run({"noise", "--config", scratch("missing.cfg").string()}) == kParse);
  CHECK(run({"spectrum", "--q", "0.7", "--out", o.string()}) == kParse);
  // too few windows for an ACF
  CHECK(run({"acf", "--T", "5", "--delta", "1", "--max-lag", "3", "--seeds", "1", "--out", o.string()}) ==
        kInsufficientData);
  // an unreachable tolerance makes the adaptive quadrature give up
  CHECK(run({"kdelta", "--rel-tol", "1e-300", "--abs-tol", "1e-300", "--grid", "0.5", "--out", o.string()}) ==
        kNumeric);
}

TEST_CASE("acf and spectrum commands") {
  const auto o = scratch("acf.csv");
  REQUIRE(run({"acf", "--mode", "tick", "--alpha", "0.6", "--q", "0", "--mu", "9", "--n", "50000", "--seeds", "8",
               "--max-lag", "2", "--out", o.string()}) == kOk);
  const auto rows = read_csv(slurp(o));
  CHECK(rows[0] == std::vector<std::string>{"lag", "acf", "std_error", "analytic"});
  REQUIRE(rows.size() == 4);
  for (int m = 0; m <= 2; ++m) {
    const auto& r = rows[static_cast<std::size_t>(m) + 1];
    CHECK(std::abs(cell(r[1]) - cell(r[3])) < 4.0 * cell(r[2]));
  }

  const auto s = scratch("spectrum.csv");
  REQUIRE(run({"spectrum", "--q", "0.1", "--grid", "0,1", "--dist", "exponential", "--out", s.string()}) == kOk);
  const auto sp = read_csv(slurp(s));
  CHECK(sp[0] == std::vector<std::string>{"omega", "B"});
  CHECK(cell(sp[1][1]) == doctest::Approx(b_zero(ModelParams::make(0.1, 0.1, 4.0))).epsilon(1e-9));
}
