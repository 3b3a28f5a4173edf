#include "msm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msm/error.hpp"
#include "msm/parallel.hpp"
#include "msm/random.hpp"
#include "msm/spectral.hpp"

namespace msm {
namespace {

void check_window(const EventStream& s, double delta, const char* where) {
  if (!(delta > 0.0) || !(delta <= s.T))
    detail::domain_fail(where, "need 0 < Delta <= T, got Delta=" + std::to_string(delta));
  const long long k = static_cast<long long>(std::floor(s.T / delta));
  if (k < kMinSamples)
    throw InsufficientDataError(std::string(where) + ": only " + std::to_string(k) +
                                " windows of length " + std::to_string(delta));
}

using Windows = std::vector<std::pair<long long, double>>;

// Sum over common indices of a[k] * b[k]; both lists sorted by k.
MeanVar joined_products(const Windows& a, const Windows& b, long long lag, long long kmax) {
  MeanVar mv;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const long long ka = a[i].first + lag;
    if (ka > kmax) break;
    if (ka < b[j].first) ++i;
    else if (ka > b[j].first) ++j;
    else {
      mv.add(a[i].second * b[j].second);
      ++i;
      ++j;
    }
  }
  return mv;
}

}  // namespace

void MeanVar::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void MeanVar::merge(const MeanVar& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double nt = static_cast<double>(n + o.n);
  const double d = o.mean - mean;
  mean += d * static_cast<double>(o.n) / nt;
  m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / nt;
  n += o.n;
}

EstimatorResult MeanVar::result() const {
  return {mean, n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0, n};
}

EstimatorResult pool(std::span<const double> per_seed) {
  MeanVar mv;
  for (double v : per_seed) mv.add(v);
  return mv.result();
}

EventStream simulate_stream(const ModelParams& p, const IntertradeDist& dist, double T,
                            std::uint64_t seed) {
  p.validate();
  dist.validate();
  if (!(T > 0.0) || !std::isfinite(T)) detail::domain_fail("simulate_stream", "horizon T must be > 0");
  EventStream s;
  s.T = T;
  const std::uint64_t dseed = child_seed(seed, Stream::Durations);
  double t = 0.0;
  const std::size_t chunk = static_cast<std::size_t>(T + 10.0 * std::sqrt(T) + 100.0);
  for (std::uint64_t c = 0; t <= T; ++c) {
    for (double tau : sample_durations(dist, chunk, child_seed(dseed, c))) {
      t += tau;
      if (t > T) break;
      s.times.push_back(t);
    }
  }
  if (!s.times.empty()) {
    // Strictly increasing times; a zero duration would break this.
    for (std::size_t k = 1; k < s.times.size(); ++k)
      if (!(s.times[k] > s.times[k - 1]))
        throw DegenerateError("simulate_stream: coincident event times");
    s.returns = simulate_ticks(p, s.times.size(), seed).returns;
  }
  return s;
}

std::vector<std::pair<long long, double>> window_sums(const EventStream& s, double delta,
                                                      double shift) {
  if (!(delta > 0.0)) detail::domain_fail("window_sums", "Delta must be > 0");
  const long long kmax = static_cast<long long>(std::floor(s.T / delta));
  Windows out;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const long long k = static_cast<long long>(std::ceil((s.times[i] - shift) / delta));
    if (k < 1 || k > kmax) continue;
    if (!out.empty() && out.back().first == k) out.back().second += s.returns[i];
    else out.emplace_back(k, s.returns[i]);
  }
  return out;
}

EstimatorResult realized_volatility(const EventStream& s, double delta) {
  check_window(s, delta, "realized_volatility");
  const long long kmax = static_cast<long long>(std::floor(s.T / delta));
  double sum = 0.0, sum2 = 0.0;
  for (const auto& [k, v] : window_sums(s, delta)) {
    const double sq = v * v;
    sum += sq;
    sum2 += sq * sq;
  }
  const double nk = static_cast<double>(kmax);
  const double mean_sq = sum / nk;
  const double var_sq = std::max(0.0, sum2 / nk - mean_sq * mean_sq);
  return {sum / s.T, nk / s.T * std::sqrt(var_sq / nk), kmax};
}

EstimatorResult realized_covariation(const EventStream& s, double delta, double zeta) {
  check_window(s, delta, "realized_covariation");
  const long long kmax = static_cast<long long>(std::floor(s.T / delta));
  const auto a = window_sums(s, delta);
  const auto b = window_sums(s, delta, zeta);
  const MeanVar mv = joined_products(a, b, 0, kmax);
  // Windows where either side is empty contribute zero products.
  const double nk = static_cast<double>(kmax);
  const double sum = mv.mean * static_cast<double>(mv.n);
  const double sum2 = mv.m2 + mv.mean * mv.mean * static_cast<double>(mv.n);
  const double mean = sum / nk;
  const double var = std::max(0.0, sum2 / nk - mean * mean);
  return {sum / s.T, nk / s.T * std::sqrt(var / nk), kmax};
}

CorrelationCurve empirical_acf(const TickSeries& t, long long max_lag) {
  const long long n = static_cast<long long>(t.returns.size());
  if (max_lag < 0) detail::domain_fail("empirical_acf", "max_lag must be >= 0");
  if (n - max_lag < kMinSamples)
    throw InsufficientDataError("empirical_acf: " + std::to_string(n) + " ticks for lag " +
                                std::to_string(max_lag));
  CorrelationCurve c;
  c.name = "acf_tick";
  for (long long m = 0; m <= max_lag; ++m) {
    MeanVar mv;
    for (long long k = 0; k + m < n; ++k)
      mv.add(t.returns[static_cast<std::size_t>(k)] * t.returns[static_cast<std::size_t>(k + m)]);
    const auto r = mv.result();
    c.abscissa.push_back(static_cast<double>(m));
    c.value.push_back(r.value);
    c.std_error.push_back(r.std_error);
  }
  return c;
}

CorrelationCurve empirical_acf(const EventStream& s, double delta, long long max_lag) {
  if (max_lag < 0) detail::domain_fail("empirical_acf", "max_lag must be >= 0");
  check_window(s, delta, "empirical_acf");
  const long long kmax = static_cast<long long>(std::floor(s.T / delta));
  if (kmax - max_lag < kMinSamples)
    throw InsufficientDataError("empirical_acf: too few windows for lag " + std::to_string(max_lag));
  const auto w = window_sums(s, delta);
  CorrelationCurve c;
  c.name = "acf_calendar";
  for (long long m = 0; m <= max_lag; ++m) {
    const MeanVar mv = joined_products(w, w, m, kmax);
    const double npairs = static_cast<double>(kmax - m);
    const double sum = mv.mean * static_cast<double>(mv.n);
    const double sum2 = mv.m2 + mv.mean * mv.mean * static_cast<double>(mv.n);
    const double mean = sum / npairs;
    const double var = std::max(0.0, sum2 / npairs - mean * mean);
    c.abscissa.push_back(static_cast<double>(m) * delta);
    c.value.push_back(mean);
    c.std_error.push_back(std::sqrt(var / npairs));
  }
  return c;
}

CorrelationCurve empirical_epps(const ModelParams& p, const IntertradeDist& dist,
                                std::span<const double> delta_grid, const EppsExperiment& ex) {
  if (!(ex.lambda >= 0.0)) detail::domain_fail("empirical_epps", "lambda must be >= 0");
  if (ex.seeds < 2) detail::domain_fail("empirical_epps", "need at least 2 seeds for an error bar");
  if (ex.twins < 1) detail::domain_fail("empirical_epps", "need at least one twin per stream");
  for (double d : delta_grid)
    if (!(d > 0.0)) detail::domain_fail("empirical_epps", "grid values must be > 0");
  const double dt = d_true(p);
  const auto per_seed = parallel_map(static_cast<std::size_t>(ex.seeds), ex.threads, [&](std::size_t i) {
    const std::uint64_t sd = child_seed(ex.seed, i);
    const EventStream s = simulate_stream(p, dist, ex.T, sd);
    Rng delay = make_rng(child_seed(sd, Stream::Delay));
    std::vector<double> zetas(static_cast<std::size_t>(ex.twins));
    for (double& z : zetas) z = ex.lambda * standard_normal(delay);
    std::vector<double> row;
    row.reserve(delta_grid.size());
    for (double delta : delta_grid) {
      double acc = 0.0;
      for (double z : zetas) acc += realized_covariation(s, delta, z).value;
      row.push_back(acc / static_cast<double>(zetas.size()) / dt);
    }
    return row;
  });
  CorrelationCurve c;
  c.name = "S12_empirical";
  c.abscissa.assign(delta_grid.begin(), delta_grid.end());
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    MeanVar mv;
    for (const auto& row : per_seed) mv.add(row[j]);
    const auto r = mv.result();
    c.value.push_back(r.value);
    c.std_error.push_back(r.std_error);
  }
  return c;
}

CorrelationCurve empirical_volatility(const ModelParams& p, const IntertradeDist& dist,
                                      std::span<const double> delta_grid, double T, int seeds,
                                      std::uint64_t seed, unsigned threads) {
  if (seeds < 2) detail::domain_fail("empirical_volatility", "need at least 2 seeds for an error bar");
  const auto per_seed = parallel_map(static_cast<std::size_t>(seeds), threads, [&](std::size_t i) {
    const EventStream s = simulate_stream(p, dist, T, child_seed(seed, i));
    std::vector<double> row;
    for (double delta : delta_grid) row.push_back(realized_volatility(s, delta).value);
    return row;
  });
  CorrelationCurve c;
  c.name = "D_hat";
  c.abscissa.assign(delta_grid.begin(), delta_grid.end());
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    MeanVar mv;
    for (const auto& row : per_seed) mv.add(row[j]);
    const auto r = mv.result();
    c.value.push_back(r.value);
    c.std_error.push_back(r.std_error);
  }
  return c;
}

double SingleTickFixture::r1(double t) const {
  // The window (t - Delta, t] contains t0.
  return (t0 <= t && t < t0 + delta) ? r : 0.0;
}

double SingleTickFixture::r2(double t) const {
  const double t1 = t0 + zeta;
  return (t1 <= t && t < t1 + delta) ? r : 0.0;
}

double SingleTickFixture::overlap_ratio() const {
  // r1 r2 is piecewise constant between these four points.
  std::vector<double> pts{t0, t0 + delta, t0 + zeta, t0 + zeta + delta};
  std::sort(pts.begin(), pts.end());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = pts[i + 1] - pts[i];
    if (len > 0.0) integral += product(0.5 * (pts[i] + pts[i + 1])) * len;
  }
  return integral / (r * r * delta);
}

}  // namespace msm
