#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "msm/cli.hpp"
#include "msm/error.hpp"

namespace msm::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x))
    throw ParseError(key + ": expected a finite number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v, long long lo) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ParseError(key + ": expected an integer, got '" + v + "'");
  if (x < lo) throw ParseError(key + ": must be >= " + std::to_string(lo) + ", got " + v);
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ParseError(key + ": expected true or false, got '" + v + "'");
}

LaplaceMethod to_laplace(const std::string& v) {
  if (v == "auto") return LaplaceMethod::Auto;
  if (v == "analytic") return LaplaceMethod::Analytic;
  if (v == "series") return LaplaceMethod::Series;
  if (v == "numeric") return LaplaceMethod::Numeric;
  throw ParseError("laplace: expected auto, analytic, series or numeric, got '" + v + "'");
}

// Library invariants surface as DomainError; at parse time they are input errors.
template <class F>
void enforce(const std::string& what, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = {
      "alpha", "d",     "q",     "mu",      "b",       "dist",   "vartheta", "beta",   "lambda",
      "delta-grid",     "grid",  "delta",   "T",       "seeds",  "n",        "seed",   "threads",
      "out",   "max-lag",        "mode",    "rel-tol", "abs-tol", "periods", "laplace", "mc",
      "full"};
  return keys;
}

Settings parse_config_text(const std::string& text, const std::string& origin) {
  Settings s;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = setting_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ParseError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ParseError(where + ": empty value for '" + key + "'");
    if (s.count(key)) throw ParseError(where + ": duplicate key '" + key + "'");
    s[key] = value;
  }
  return s;
}

Settings read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::vector<double> parse_grid(const std::string& spec) {
  const std::string s = trim(spec);
  if (s.empty()) throw ParseError("grid: empty specification");
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
    if (parts.size() < 3 || parts.size() > 4) throw ParseError("grid: expected lo:hi:n[:log|lin], got '" + s + "'");
    const double lo = to_double("grid lo", parts[0]);
    const double hi = to_double("grid hi", parts[1]);
    const long long n = to_int("grid n", parts[2], 1);
    const std::string kind = parts.size() == 4 ? parts[3] : "lin";
    if (kind != "lin" && kind != "log") throw ParseError("grid: spacing must be lin or log, got '" + kind + "'");
    if (n == 1 && lo != hi) throw ParseError("grid: n = 1 needs lo == hi");
    if (kind == "log" && !(lo > 0.0 && hi > 0.0)) throw ParseError("grid: log spacing needs positive end points");
    out.resize(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out[static_cast<std::size_t>(i)] =
          kind == "log" ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    // pin the end points against rounding in exp/log
    out.front() = lo;
    out.back() = hi;
  } else {
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double("grid", trim(p)));
  }
  return out;
}

ModelParams RunConfig::model() const {
  ModelParams p = ModelParams::make(alpha(), q, mu, b);
  return p;
}

IntertradeDist RunConfig::distribution() const {
  if (dist == "exponential") return IntertradeDist::exponential();
  if (dist == "weibull") return IntertradeDist::weibull(beta);
  return IntertradeDist::ggd(vartheta, beta);
}

RunConfig build_config(const Settings& s) {
  RunConfig c;
  auto has = [&](const char* k) { return s.count(k) > 0; };
  auto num = [&](const char* k, double& dst) {
    if (has(k)) dst = to_double(k, s.at(k));
  };
  if (has("alpha") && has("d")) throw ParseError("give exactly one of alpha and d, not both");
  if (has("alpha")) {
    const double a = to_double("alpha", s.at("alpha"));
    if (!(a > 0.0 && a < 1.0)) throw ParseError("alpha must lie in (0, 1), got " + s.at("alpha"));
    c.d = 0.5 * (1.0 - a);
  } else if (has("d")) {
    c.d = to_double("d", s.at("d"));
    if (!(c.d > 0.0 && c.d < 0.5)) throw ParseError("d must lie in (0, 1/2), got " + s.at("d"));
  }
  num("q", c.q);
  num("mu", c.mu);
  num("b", c.b);
  if (has("dist")) {
    c.dist = s.at("dist");
    if (c.dist != "exponential" && c.dist != "weibull" && c.dist != "ggd")
      throw ParseError("dist: expected exponential, weibull or ggd, got '" + c.dist + "'");
  }
  num("vartheta", c.vartheta);
  num("beta", c.beta);
  num("lambda", c.lambda);
  if (!(c.lambda >= 0.0)) throw ParseError("lambda must be >= 0");
  num("delta", c.delta);
  if (!(c.delta > 0.0)) throw ParseError("delta must be > 0");
  num("T", c.T);
  if (!(c.T > 0.0)) throw ParseError("T must be > 0");
  if (has("seeds")) c.seeds = static_cast<int>(to_int("seeds", s.at("seeds"), 1));
  if (has("n")) c.n = to_int("n", s.at("n"), 2);
  if (has("seed")) c.seed = static_cast<std::uint64_t>(to_int("seed", s.at("seed"), 0));
  if (has("threads")) c.threads = static_cast<unsigned>(to_int("threads", s.at("threads"), 0));
  if (has("out")) c.out = s.at("out");
  if (has("max-lag")) c.max_lag = to_int("max-lag", s.at("max-lag"), 0);
  if (has("mode")) {
    c.mode = s.at("mode");
    if (c.mode != "tick" && c.mode != "calendar") throw ParseError("mode: expected tick or calendar");
  }
  num("rel-tol", c.quad.rel_tol);
  num("abs-tol", c.quad.abs_tol);
  if (has("periods")) c.quad.periods = static_cast<int>(to_int("periods", s.at("periods"), 1));
  if (has("laplace")) c.quad.laplace = to_laplace(s.at("laplace"));
  if (has("mc")) c.mc = to_bool("mc", s.at("mc"));
  if (has("full")) c.full = to_bool("full", s.at("full"));

  c.delta_grid = parse_grid(has("delta-grid") ? s.at("delta-grid") : "0.01:1000:31:log");
  for (double x : c.delta_grid)
    if (!(x > 0.0)) throw ParseError("delta-grid: every point must be > 0");
  if (has("grid")) {
    c.grid = parse_grid(s.at("grid"));
    c.has_grid = true;
  }

  enforce("model", [&] { c.model(); });
  enforce("dist", [&] { c.distribution(); });
  enforce("quadrature", [&] { c.quad.validate(); });
  return c;
}

}  // namespace msm::cli
