#pragma once
// Calendar-time simulation and the empirical estimators that check the
// analytic curves.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "msm/curve.hpp"
#include "msm/intertrade.hpp"
#include "msm/tick_model.hpp"

namespace msm {

struct EventStream {
  std::vector<double> times;
  std::vector<double> returns;
  double T = 0.0;
};

struct EstimatorResult {
  double value = 0.0;
  double std_error = 0.0;
  long long n_effective = 0;
};

// Minimum number of windows (or lagged pairs) an estimator accepts.
inline constexpr long long kMinSamples = 30;

EventStream simulate_stream(const ModelParams& p, const IntertradeDist& dist, double T,
                            std::uint64_t seed);

// Non-empty windows (k, R_Delta(k Delta)) for k = 1..floor(T/Delta),
// with window k covering ((k-1) Delta, k Delta]. Event times are moved
// by -shift first, so shift = zeta gives the windows of R(t + zeta).
std::vector<std::pair<long long, double>> window_sums(const EventStream& s, double delta,
                                                      double shift = 0.0);

// (1/T) sum of R_Delta(k Delta)^2 over k <= floor(T/Delta). The standard
// error treats the window returns as uncorrelated, which understates it
// under long memory; pool over independent seeds for honest errors.
EstimatorResult realized_volatility(const EventStream& s, double delta);

// (1/T) sum of R_Delta(k Delta) R'_Delta(k Delta) with R' the stream
// delayed by zeta.
EstimatorResult realized_covariation(const EventStream& s, double delta, double zeta);

// Tick-time autocovariance E[r_k r_{k+m}] for m = 0..max_lag.
CorrelationCurve empirical_acf(const TickSeries& t, long long max_lag);

// Calendar-time autocovariance E[R_Delta(t) R_Delta(t + m Delta)] on
// non-overlapping windows, m = 0..max_lag.
CorrelationCurve empirical_acf(const EventStream& s, double delta, long long max_lag);

// Mean of per-seed estimates with standard error sd / sqrt(n).
EstimatorResult pool(std::span<const double> per_seed);

// Streaming mean and variance accumulator; merge() is associative.
struct MeanVar {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const MeanVar& o);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  EstimatorResult result() const;
};

struct EppsExperiment {
  double lambda = 1.0;
  double T = 1e6;
  int seeds = 16;
  // Delayed twins drawn per simulated stream.
  int twins = 4;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// For each seed: one stream, `twins` Gaussian delays zeta, estimator
// (1/T) sum R_1 R_2 averaged over twins and divided by D_true. Values and
// errors are pooled over seeds.
CorrelationCurve empirical_epps(const ModelParams& p, const IntertradeDist& dist,
                                std::span<const double> delta_grid, const EppsExperiment& ex);

// Realized volatility pooled over seeds, one entry per Delta.
CorrelationCurve empirical_volatility(const ModelParams& p, const IntertradeDist& dist,
                                      std::span<const double> delta_grid, double T, int seeds,
                                      std::uint64_t seed, unsigned threads = 1);

// Single-tick illustrations: a return r at time t0 and its copy at t0 + zeta.
struct SingleTickFixture {
  double t0 = 0.0;
  double r = 1.0;
  double delta = 1.0;
  double zeta = 0.5;

  double r1(double t) const;
  double r2(double t) const;
  double product(double t) const { return r1(t) * r2(t); }
  // Exact integral of r1 r2 over t, divided by r^2 Delta.
  double overlap_ratio() const;
};

}  // namespace msm
