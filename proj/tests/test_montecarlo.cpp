#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "msm/error.hpp"
#include "msm/montecarlo.hpp"
#include "msm/random.hpp"
#include "msm/spectral.hpp"
#include "stats.hpp"

using namespace msm;

namespace {

const ModelParams kFig7 = ModelParams::make(0.1, 0.0, 4.0);
const IntertradeDist kGgd = IntertradeDist::ggd(0.8, 2.0 / 3.0);

}  // namespace

TEST_CASE("event stream basics") {
  const auto p = ModelParams::make(0.1, 0.2, 5.0);
  std::vector<double> rate;
  for (std::uint64_t s = 0; s < 16; ++s) {
    const auto e = simulate_stream(p, kGgd, 1e5, 40 + s);
    REQUIRE(e.times.size() == e.returns.size());
    CHECK(std::adjacent_find(e.times.begin(), e.times.end(), std::greater_equal<>()) == e.times.end());
    CHECK(e.times.front() > 0.0);
    CHECK(e.times.back() <= e.T);
    rate.push_back(static_cast<double>(e.times.size()) / e.T);
  }
  const auto r = teststats::mean_se(rate);
  CHECK(std::abs(r.mean - 1.0) < 3.0 * r.se);

  const auto a = simulate_stream(p, kGgd, 2e4, 7), b = simulate_stream(p, kGgd, 2e4, 7);
  CHECK(a.times == b.times);
  CHECK(a.returns == b.returns);
  CHECK(realized_volatility(a, 1.0).value == realized_volatility(b, 1.0).value);
  CHECK(simulate_stream(p, kGgd, 2e4, 8).times != a.times);
}

TEST_CASE("returns are independent of the clock") {
  const auto p = ModelParams::make(0.3, 0.1, 6.0);
  const auto dist = IntertradeDist::weibull(0.6);
  const auto orig = simulate_stream(p, dist, 2e5, 3);
  auto s = orig;
  std::mt19937_64 g(5);
  std::shuffle(s.returns.begin(), s.returns.end(), g);
  // The clock is untouched and the marginal law of r is the same multiset.
  CHECK(s.times == orig.times);
  auto a = orig.returns, b = s.returns;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  // A random permutation removes the tick correlations, so coarse windows
  // see only the white part eps_2: RV(Delta) collapses to sum r^2 / T.
  double sq = 0.0;
  for (double r : s.returns) sq += r * r;
  const auto rv = realized_volatility(s, 50.0);
  CHECK(std::abs(rv.value - sq / s.T) < 3.0 * rv.std_error);
  // while the unshuffled stream keeps its bounce-induced reduction
  const auto rv0 = realized_volatility(orig, 50.0);
  CHECK(rv0.value < rv.value - 3.0 * rv.std_error);
}

TEST_CASE("two-step gaps follow the twofold convolution") {
  const auto p = ModelParams::make(0.5, 0.3, 5.0);
  const auto s = simulate_stream(p, IntertradeDist::exponential(), 2e5, 11);
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 2 < s.times.size(); i += 2) gaps.push_back(s.times[i + 2] - s.times[i]);
  // Gamma(2, 1) distribution function
  CHECK(teststats::ks_statistic(gaps, [](double t) { return 1.0 - (1.0 + t) * std::exp(-t); }) <
        teststats::kKs1pct);
}

TEST_CASE("realized volatility estimator") {
  EventStream one;
  one.T = 100.0;
  one.times = {0.5};
  one.returns = {2.0};
  CHECK(realized_volatility(one, 1.0).value == doctest::Approx(4.0 / 100.0).epsilon(1e-15));
  one.times = {1.0};  // right-closed windows: t = 1 belongs to (0, 1]
  CHECK(window_sums(one, 1.0).front().first == 1);
  CHECK_THROWS_AS(realized_volatility(one, 10.0), InsufficientDataError);
  CHECK_THROWS_AS(realized_volatility(one, 0.0), DomainError);
  CHECK_THROWS_AS(realized_volatility(one, 200.0), DomainError);

  const auto p = ModelParams::make(0.1, 0.2, 5.0);
  const std::vector<double> grid{0.01, 1000.0};
  const auto c = empirical_volatility(p, kGgd, grid, 1e6, 16, 9);
  INFO("D_micro " << c.value[0] << " +- " << c.std_error[0] << "  D_true " << c.value[1] << " +- " << c.std_error[1]);
  CHECK(std::abs(c.value[0] - volatility_density(p, kGgd, 0.01)) < 3.0 * c.std_error[0]);
  // D(0.01) itself sits 1.6% below D_micro = eps_2, hence the allowance.
  CHECK(std::abs(c.value[0] - p.eps2()) < 3.0 * c.std_error[0] + 0.02 * p.eps2());
  CHECK(std::abs(c.value[1] - d_true(p)) < 3.0 * c.std_error[1]);
}

TEST_CASE("tick and calendar autocovariances") {
  // Tick mode needs weak memory and a finite fourth moment for honest
  // errors; pool 16 seeds.
  const auto pt = ModelParams::make(0.6, 0.0, 9.0);
  std::vector<double> l0, l1;
  for (std::uint64_t s = 0; s < 16; ++s) {
    const auto a = empirical_acf(simulate_ticks(pt, 200'000, 21 + s), 1);
    l0.push_back(a.value[0]);
    l1.push_back(a.value[1]);
  }
  const auto m0 = teststats::mean_se(l0), m1 = teststats::mean_se(l1);
  CHECK(std::abs(m0.mean - pt.eps2()) < 3.0 * m0.se);
  CHECK(m1.mean < 0.0);
  CHECK(std::abs(m1.mean - tick_correlation_exact(pt, 1)) < 3.0 * m1.se);
  // The power law F(alpha) m^-alpha is asymptotic; at m = 1 it sits 1.4%
  // away from the exact rho_1 = d/(1-d), which this many ticks resolve.
  CHECK(m1.mean == doctest::Approx(tick_correlation(pt, 1)).epsilon(0.03));
  CHECK_THROWS_AS(empirical_acf(simulate_ticks(kFig7, 20, 1), 0), InsufficientDataError);

  // Calendar mode on Delta = 1, pooled over seeds.
  std::vector<std::vector<double>> lags(4);
  for (std::uint64_t s = 0; s < 16; ++s) {
    const auto e = simulate_stream(kFig7, kGgd, 1e6, 300 + s);
    const auto c = empirical_acf(e, 1.0, 3);
    for (int m = 0; m <= 3; ++m) lags[m].push_back(c.value[m]);
  }
  for (int m = 0; m <= 3; ++m) {
    const auto ms = teststats::mean_se(lags[m]);
    const double k = k_delta(kFig7, kGgd, 1.0, m);
    INFO("m=" << m << " mc=" << ms.mean << " se=" << ms.se << " analytic=" << k);
    CHECK(std::abs(ms.mean - k) < 3.0 * ms.se);
    if (m >= 1) CHECK(ms.mean < 0.0);
  }
}

TEST_CASE("empirical Epps experiment") {
  const auto p = ModelParams::make(0.1, 0.2, 5.0);
  const std::vector<double> grid{0.1, 1.0, 10.0};
  EppsExperiment ex;
  ex.lambda = 0.0;
  ex.T = 2e5;
  ex.seeds = 4;
  ex.twins = 2;
  ex.seed = 17;
  const auto e0 = empirical_epps(p, kGgd, grid, ex);
  const auto rv = empirical_volatility(p, kGgd, grid, ex.T, ex.seeds, ex.seed);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(e0.value[i] == doctest::Approx(rv.value[i] / d_true(p)).epsilon(1e-12));

  ex.lambda = 1.0;
  ex.seeds = 8;
  const std::vector<double> fine{0.01, 0.1, 1.0, 10.0};
  const auto e1 = empirical_epps(p, kGgd, fine, ex);
  CHECK(e1.value[0] < 0.05);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const double an = cross_vol(p, kGgd, {1.0}, fine[i]) / d_true(p);
    INFO("Delta=" << fine[i] << " mc=" << e1.value[i] << " se=" << e1.std_error[i] << " analytic=" << an);
    CHECK(std::abs(e1.value[i] - an) < 3.0 * e1.std_error[i]);
  }
  ex.threads = 3;
  CHECK(empirical_epps(p, kGgd, fine, ex).value == e1.value);
  ex.seeds = 1;
  CHECK_THROWS_AS(empirical_epps(p, kGgd, fine, ex), DomainError);
}

TEST_CASE("single-tick delay fixtures") {
  // Delta < zeta: the two windows never hold the tick at the same time.
  const SingleTickFixture apart{3.0, 1.7, 0.4, 0.9};
  bool all_zero = true;
  for (double t = 0.0; t < 6.0; t += 1e-3) all_zero &= apart.product(t) == 0.0;
  CHECK(all_zero);
  CHECK(apart.overlap_ratio() == 0.0);
  // Delta > zeta: overlap of length Delta - zeta.
  for (const auto& [delta, zeta] : {std::pair{1.0, 0.3}, std::pair{2.5, 0.5}, std::pair{0.7, 0.69}}) {
    const SingleTickFixture f{1.0, -0.8, delta, zeta};
    CHECK(std::abs(f.overlap_ratio() - (delta - zeta) / delta) < 1e-12);
    CHECK(f.product(1.0 + zeta) == doctest::Approx(0.64));
  }
}

TEST_CASE("standard errors scale like one over root T") {
  // Short memory and light tails, so the window returns are close to
  // uncorrelated with finite fourth moments.
  const auto p = ModelParams::make(0.95, 0.3, 12.0);
  const auto dist = IntertradeDist::exponential();
  double r_rv = 0.0, r_cov = 0.0, r_acf = 0.0;
  const int reps = 6;
  for (int i = 0; i < reps; ++i) {
    const auto a = simulate_stream(p, dist, 1e5, 500 + i);
    const auto b = simulate_stream(p, dist, 2e5, 600 + i);
    r_rv += realized_volatility(b, 1.0).std_error / realized_volatility(a, 1.0).std_error;
    r_cov += realized_covariation(b, 1.0, 0.4).std_error / realized_covariation(a, 1.0, 0.4).std_error;
    r_acf += empirical_acf(b, 1.0, 1).std_error[1] / empirical_acf(a, 1.0, 1).std_error[1];
  }
  const double target = 1.0 / std::sqrt(2.0);
  CHECK(r_rv / reps == doctest::Approx(target).epsilon(0.2));
  CHECK(r_cov / reps == doctest::Approx(target).epsilon(0.2));
  CHECK(r_acf / reps == doctest::Approx(target).epsilon(0.2));

  // Across-seed errors of the pooled estimator follow the same law.
  std::vector<double> short_t, long_t;
  for (int i = 0; i < 60; ++i) {
    short_t.push_back(realized_volatility(simulate_stream(p, dist, 2e4, 1000 + i), 1.0).value);
    long_t.push_back(realized_volatility(simulate_stream(p, dist, 4e4, 2000 + i), 1.0).value);
  }
  CHECK(pool(long_t).std_error / pool(short_t).std_error == doctest::Approx(target).epsilon(0.2));
}

TEST_CASE("mean-variance merge") {
  std::vector<double> x(1000);
  std::iota(x.begin(), x.end(), 0.0);
  MeanVar all, left, right;
  for (std::size_t i = 0; i < x.size(); ++i) {
    all.add(x[i]);
    (i < 377 ? left : right).add(x[i]);
  }
  left.merge(right);
  CHECK(left.n == all.n);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-14));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
  const auto ms = teststats::mean_se(x);
  CHECK(all.result().std_error == doctest::Approx(ms.se).epsilon(1e-12));
}
