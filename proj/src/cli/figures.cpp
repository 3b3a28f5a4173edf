#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "msm/arfima.hpp"
#include "msm/cli.hpp"
#include "msm/parallel.hpp"

namespace msm::cli {
namespace {

std::string tag(double v) { return short_number(v); }

std::vector<double> lin(double lo, double hi, int n) { return parse_grid(tag(lo) + ":" + tag(hi) + ":" + std::to_string(n)); }
std::vector<double> logspace(double lo, double hi, int n) {
  return parse_grid(tag(lo) + ":" + tag(hi) + ":" + std::to_string(n) + ":log");
}

template <class F>
std::vector<double> column(const std::vector<double>& x, unsigned threads, F&& f) {
  return parallel_map(x.size(), threads, [&](std::size_t i) { return f(x[i]); });
}

IntertradeDist fig_ggd() { return IntertradeDist::ggd(0.8, 2.0 / 3.0); }

Table fig1(const RunConfig&) {
  Table t;
  std::vector<double> m(31);
  std::iota(m.begin(), m.end(), 0.0);
  t.add("m", m);
  for (double q : {0.1, 0.2, 0.3}) {
    const auto p = ModelParams::make(0.1, q, 4.0);
    t.add("K_m(q=" + tag(q) + ")", column(m, 1, [&](double x) { return tick_correlation(p, std::llround(x)); }));
  }
  return t;
}

Table fig2(const RunConfig& c) {
  std::vector<double> m;
  for (double x : logspace(1.0, 1000.0, 40)) {
    const double r = std::round(x);
    if (m.empty() || r != m.back()) m.push_back(r);
  }
  Table t;
  t.add("m", m);
  const auto p = ModelParams::make(0.1, 0.0, 4.0);  // sigma = 2 alpha = 0.2
  for (double th : {0.5, 1.0, 1.5}) {
    t.add("A_exact(theta=" + tag(th) + ")",
          column(m, c.threads, [&](double x) { return abs_return_corr(p, th, std::llround(x), CorrMode::Exact); }));
    t.add("A_approx(theta=" + tag(th) + ")",
          column(m, 1, [&](double x) { return abs_return_corr(p, th, std::llround(x), CorrMode::Approx); }));
  }
  return t;
}

Table fig3(const RunConfig&) {
  const auto th = lin(0.05, 1.95, 39);
  Table t;
  t.add("theta", th);
  for (double mu : {4.0, 5.0, 6.0, 8.0}) t.add("Lambda(mu=" + tag(mu) + ")", lambda_shape(ModelParams::make(0.1, 0.0, mu), th, 1).value);
  return t;
}

Table fig4(const RunConfig& c) {
  const int n = 50;
  Table t;
  std::vector<double> k(n);
  std::iota(k.begin(), k.end(), 1.0);
  t.add("k", k);
  std::uint64_t stream = 0;
  for (double b : {0.5, 1.0, 2.0}) {
    auto tau = sample_durations(IntertradeDist::weibull(b), n, c.seed + stream++);
    std::partial_sum(tau.begin(), tau.end(), tau.begin());
    t.add("t_k(beta=" + tag(b) + ")", tau);
  }
  return t;
}

Table fig5(const RunConfig&) {
  const auto tau = lin(0.0, 15.0, 151);
  Table t;
  t.add("tau", tau);
  const auto w = IntertradeDist::weibull(0.8);
  t.add("Q_weibull(beta=0.8)", column(tau, 1, [&](double x) { return survival(w, x); }));
  for (double b : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
    const auto g = IntertradeDist::ggd(0.8, b);
    t.add("Q_ggd(beta=" + std::string(b < 0.4 ? "1/3" : b < 0.6 ? "1/2" : "2/3") + ")", column(tau, 1, [&](double x) { return survival(g, x); }));
  }
  return t;
}

Table fig6(const RunConfig& c) {
  const auto w = lin(0.0, 10.0, 101);
  const auto p = ModelParams::make(0.1, 0.1, 4.0);
  Table t;
  t.add("omega", w);
  const std::pair<const char*, IntertradeDist> laws[] = {
      {"B(exponential)", IntertradeDist::exponential()},
      {"B(ggd;beta=0.5)", IntertradeDist::ggd(0.8, 0.5)},
      {"B(ggd;beta=2/3)", IntertradeDist::ggd(0.8, 2.0 / 3.0)}};
  for (const auto& [name, d] : laws)
    t.add(name, column(w, c.threads, [&](double x) { return b_spectrum(p, d, x, c.quad); }));
  return t;
}

std::vector<double> normalized_k(const ModelParams& p, double delta, const std::vector<double>& tau,
                                 const RunConfig& c) {
  const auto d = fig_ggd();
  const double k0 = k_delta(p, d, delta, 0.0, c.quad);
  return column(tau, c.threads, [&](double x) { return k_delta(p, d, delta, x, c.quad) / k0; });
}

Table fig7(const RunConfig& c) {
  const auto tau = lin(0.0, 5.0, 101);
  Table t;
  t.add("tau", tau);
  for (double q : {0.0, 0.1, 0.2, 0.3})
    t.add("K/K0(q=" + tag(q) + ")", normalized_k(ModelParams::make(0.1, q, 4.0), 1.0, tau, c));
  return t;
}

Table fig8(const RunConfig& c) {
  const auto tau = lin(0.0, 8.0, 161);
  const auto p = ModelParams::make(0.1, 0.0, 4.0);
  Table t;
  t.add("tau", tau);
  for (double dl : {1.0, 2.0, 3.0}) t.add("K/K0(Delta=" + tag(dl) + ")", normalized_k(p, dl, tau, c));
  // right panel: the same curves against tau / Delta, read off the first column
  for (double dl : {1.0, 2.0, 3.0}) {
    std::vector<double> scaled(tau.size());
    std::transform(tau.begin(), tau.end(), scaled.begin(), [&](double x) { return x * dl; });
    t.add("K/K0(Delta=" + tag(dl) + ";tau/Delta)", normalized_k(p, dl, scaled, c));
  }
  return t;
}

Table strength_family(const std::string& xname, const std::vector<double>& x, const std::vector<double>& family,
                      const std::string& fname, const RunConfig& c,
                      const std::function<ModelParams(double, double)>& make) {
  Table t;
  t.add(xname, x);
  for (double f : family)
    t.add("S(" + fname + "=" + tag(f) + ")", column(x, c.threads, [&](double v) { return noise_strength(make(v, f)); }));
  return t;
}

const std::vector<double> kQs = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};

Table fig9(const RunConfig& c) {
  return strength_family("alpha", lin(0.02, 0.98, 49), kQs, "q", c,
                         [](double a, double q) { return ModelParams::make(a, q, 4.0); });
}

Table fig10(const RunConfig& c) {
  // alpha = 0 itself is outside the model; 0.001 stands in for it
  return strength_family("q", lin(0.0, 0.5, 51), {0.001, 0.1, 0.2, 0.3, 0.4, 0.5}, "alpha", c,
                         [](double q, double a) { return ModelParams::make(a, q, 5.0); });
}

Table fig11(const RunConfig& c) {
  return strength_family("mu", lin(2.25, 10.0, 32), kQs, "q", c,
                         [](double mu, double q) { return ModelParams::make(0.2, q, mu); });
}

Table fig12(const RunConfig& c) {
  const auto grid = logspace(0.01, 1000.0, 41);
  Table t;
  t.add("Delta", grid);
  for (double q : {0.0, 0.1, 0.2, 0.3, 0.4})
    t.add("S_Delta(q=" + tag(q) + ")",
          noise_curve(ModelParams::make(0.1, q, 5.0), c.distribution(), grid, c.quad, c.threads).value);
  return t;
}

Table fig15(const RunConfig& c) {
  const auto grid = logspace(0.01, 1000.0, 41);
  const auto p = ModelParams::make(0.1, 0.0, 4.0);
  Table t;
  t.add("Delta", grid);
  for (double lam : {1.0, 2.0, 3.0})
    t.add("S12(lambda=" + tag(lam) + ")", epps_curve(p, c.distribution(), {lam}, grid, c.quad, c.threads).value);
  return t;
}

Table figA1(const RunConfig&) {
  const auto d = lin(0.01, 0.49, 49);
  Table t;
  t.add("d", d);
  for (long long m : {1, 2, 5, 10, 50})
    t.add("rho/varrho(m=" + std::to_string(m) + ")", column(d, 1, [&](double x) {
            return correlation_exact(x, m) / correlation_powerlaw(1.0 - 2.0 * x, m);
          }));
  return t;
}

Table figA2(const RunConfig&) {
  const auto d = lin(0.005, 0.495, 99);
  Table t;
  t.add("d", d);
  t.add("rho_1", column(d, 1, [](double x) { return correlation_exact(x, 1); }));
  return t;
}

Table figA3(const RunConfig& c) {
  const auto rho = lin(0.0, 0.5, 51);
  Table t;
  t.add("rho", rho);
  for (double th : {0.5, 1.0, 1.5}) {
    t.add("F_tilde(theta=" + tag(th) + ")", column(rho, c.threads, [&](double r) { return f_tilde(th, r); }));
    t.add("G(theta=" + tag(th) + ")", column(rho, 1, [&](double r) { return quadratic_approx(th, r); }));
  }
  return t;
}

Table figA4(const RunConfig& c) {
  // rho = 0 is a 0/0 limit; start at the first grid step
  const auto rho = lin(0.01, 0.5, 50);
  Table t;
  t.add("rho", rho);
  for (double th : {0.5, 1.0, 1.5})
    t.add("F_tilde/G(theta=" + tag(th) + ")",
          column(rho, c.threads, [&](double r) { return f_tilde(th, r) / quadratic_approx(th, r); }));
  return t;
}

using FigureFn = Table (*)(const RunConfig&);

const std::vector<std::pair<std::string, FigureFn>>& registry() {
  static const std::vector<std::pair<std::string, FigureFn>> r = {
      {"1", fig1},   {"2", fig2},   {"3", fig3},   {"4", fig4},   {"5", fig5},   {"6", fig6},
      {"7", fig7},   {"8", fig8},   {"9", fig9},   {"10", fig10}, {"11", fig11}, {"12", fig12},
      {"15", fig15}, {"A1", figA1}, {"A2", figA2}, {"A3", figA3}, {"A4", figA4}};
  return r;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

Table run_figure(const std::string& id, const RunConfig& cfg) {
  std::string key = id;
  if (!key.empty() && key[0] == 'a') key[0] = 'A';
  for (const auto& [name, fn] : registry())
    if (name == key) return fn(cfg);
  std::string known;
  for (const auto& s : figure_ids()) known += (known.empty() ? "" : ", ") + s;
  throw ParseError("unknown figure '" + id + "' (known: " + known + ")");
}

}  // namespace msm::cli
