#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "msm/error.hpp"
#include "msm/spectral.hpp"
#include "oracles.hpp"

using namespace msm;

namespace {

// 2 sum_m B_m with B_m = K_m / eps_2.
double twice_tick_sum(const ModelParams& p) {
  if (p.q() == 0.0) {
    // sum (-1)^m m^-alpha = -eta(alpha), eta the alternating zeta function
    const double a = p.alpha();
    const double eta = (1.0 - std::pow(2.0, 1.0 - a)) * boost::math::zeta(a);
    return -2.0 * p.gamma_factor() * eta;
  }
  double s = 0.0;
  for (long long m = 1;; ++m) {
    const double b = tick_correlation(p, m) / p.eps2();
    s += b;
    if (std::abs(b) < 1e-18) break;
  }
  return 2.0 * s;
}

// (T_Delta * phi_lambda)(s) from the ramp decomposition of the triangle.
double smoothed_triangle(double delta, double lambda, double s) {
  auto h = [lambda](double x) {
    const double z = x / lambda;
    return x * 0.5 * boost::math::erfc(-z / std::numbers::sqrt2) +
           lambda * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  };
  return h(s + delta) - 2.0 * h(s) + h(s - delta);
}

// Continuous calendar-time correlation B(tau) for exponential durations,
// sum_m B_m tau^(m-1) e^-tau / (m-1)!.
double b_time(const ModelParams& p, double tau) {
  double s = 0.0, w = std::exp(-tau);
  for (long long m = 1; m < 2000; ++m) {
    if (m > 1) w *= tau / static_cast<double>(m - 1);
    s += tick_correlation(p, m) / p.eps2() * w;
    if (m > tau + 10 && w < 1e-20) break;
  }
  return s;
}

// D_12 straight from the time-domain convolution.
double cross_vol_time_domain(const ModelParams& p, double delta, double lambda) {
  const double r = delta / lambda;
  const double jterm = std::erf(r / std::numbers::sqrt2) -
                       2.0 / r / std::sqrt(2.0 * std::numbers::pi) * (1.0 - std::exp(-0.5 * r * r));
  const double upper = delta + 12.0 * lambda + 60.0;
  const double conv = oracle::integrate([&](double s) { return b_time(p, s) * smoothed_triangle(delta, lambda, s); },
                                        0.0, upper);
  return p.eps2() * (jterm + 2.0 * conv / delta);
}

}  // namespace

TEST_CASE("spectrum at q = 1/2 and distribution independence at zero") {
  const auto half = ModelParams::make(0.1, 0.5, 4.0);
  for (double w : {0.0, 0.3, 2.0}) CHECK(b_spectrum(half, IntertradeDist::exponential(), w) == 0.0);
  CHECK(b_zero(half) == 0.0);
  CHECK(noise_strength(half) == 1.0);
  for (double q : {0.0, 0.1, 0.3}) {
    const auto p = ModelParams::make(0.1, q, 4.0);
    const double b0 = b_zero(p);
    CHECK(std::abs(b_spectrum(p, IntertradeDist::exponential(), 0.0) - b0) < 1e-6);
    CHECK(std::abs(b_spectrum(p, IntertradeDist::ggd(0.8, 2.0 / 3.0), 0.0) - b0) < 1e-6);
    CHECK(std::abs(b_spectrum(p, IntertradeDist::weibull(0.8), 0.0) - b0) < 1e-6);
  }
  CHECK_THROWS_AS(b_zero(ModelParams::make(0.1, 0.7, 4.0)), DomainError);
}

TEST_CASE("zero-frequency spectrum equals the tick series") {
  for (double alpha : {0.1, 0.2, 0.5})
    for (double q : {0.0, 0.1, 0.25, 0.4}) {
      const auto p = ModelParams::make(alpha, q, 5.0);
      INFO("alpha=" << alpha << " q=" << q);
      const double b0 = b_zero(p);
      CHECK(std::abs(b0 - twice_tick_sum(p)) < 1e-9);
      CHECK(b0 <= 0.0);
      CHECK(b0 > -1.0);
    }
  // |B~(0)| decreases with q, so S does too
  for (double alpha : {0.1, 0.2}) {
    double prev_b = 2.0, prev_s = 1e300;
    for (double q : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
      const auto p = ModelParams::make(alpha, q, 5.0);
      CHECK(std::abs(b_zero(p)) < prev_b);
      CHECK(noise_strength(p) < prev_s);
      CHECK(noise_strength(p) >= 1.0);
      prev_b = std::abs(b_zero(p));
      prev_s = noise_strength(p);
    }
  }
  CHECK(noise_strength(ModelParams::make(0.1, 0.2, 5.0)) == doctest::Approx(2.16812).epsilon(1e-5));
}

TEST_CASE("triangle kernel") {
  CHECK(triangle_spectrum(2.0, 0.0) == 4.0);
  CHECK(triangle_spectrum(2.0, 1e-9) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(std::abs(triangle_spectrum(1.0, 2.0 * std::numbers::pi)) < 1e-30);
  CHECK(triangle_spectrum(1.0, std::numbers::pi) == doctest::Approx(4.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-15));
  for (double w : {0.1, 1.3, 40.0}) CHECK(triangle_spectrum(1.5, w) >= 0.0);
  CHECK(triangle(1.0, 0.25) == 0.75);
  CHECK(triangle(1.0, -0.25) == 0.75);
  CHECK(triangle(1.0, 1.5) == 0.0);
  // Fourier pair: (1/pi) int T~ cos(w tau) dw = T(tau)
  for (double tau : {0.0, 0.4, 1.0, 1.7}) {
    const double v = oracle::integrate([&](double w) { return triangle_spectrum(1.0, w) * std::cos(w * tau); }, 0.0, 2000.0) / std::numbers::pi;
    CHECK(std::abs(v - triangle(1.0, tau)) < 1e-3);
  }
  CHECK_THROWS_AS(triangle_spectrum(0.0, 1.0), DomainError);
}

TEST_CASE("Delta-scale correlation") {
  const auto white = ModelParams::make(0.1, 0.5, 4.0);
  const auto e = IntertradeDist::exponential();
  for (double tau : {0.0, 0.3, 1.0, 1.5}) CHECK(std::abs(k_delta(white, e, 1.0, tau) - white.eps2() * triangle(1.0, tau)) < 1e-8);

  const auto p = ModelParams::make(0.1, 0.0, 4.0);
  const auto g = IntertradeDist::ggd(0.8, 2.0 / 3.0);
  const double k0 = k_delta(p, g, 1.0, 0.0);
  CHECK(k0 == doctest::Approx(volatility_density(p, g, 1.0)).epsilon(1e-14));
  CHECK(k0 == doctest::Approx(0.285472).epsilon(1e-5));
  for (double tau : {0.5, 1.2, 2.5}) CHECK(k_delta(p, g, 1.0, tau) == k_delta(p, g, 1.0, -tau));
  for (double tau : {1.05, 1.2, 1.5, 2.0}) CHECK(k_delta(p, g, 1.0, tau) < 0.0);
  CHECK(k_delta(p, g, 1.0, 1.0) == doctest::Approx(-0.046149).epsilon(1e-4));
  CHECK(std::abs(k_delta(p, g, 1.0, 60.0)) < 1e-4 * k0);
}

TEST_CASE("noise strength over Delta") {
  const auto p = ModelParams::make(0.1, 0.2, 5.0);
  const auto g = IntertradeDist::ggd(0.8, 2.0 / 3.0);
  const double s = noise_strength(p);
  const double s_small = noise_strength_delta(p, g, 0.01);
  const double s_one = noise_strength_delta(p, g, 1.0);
  const double s_big = noise_strength_delta(p, g, 1000.0);
  CHECK(std::abs(s_small - s) / s < 0.02);
  CHECK(s_one > 1.0);
  CHECK(s_one < s);
  CHECK(s_big == doctest::Approx(1.0).epsilon(1e-3));
  // D_true recovery
  CHECK(volatility_density(p, g, 1000.0) == doctest::Approx(d_true(p)).epsilon(1e-3));
  CHECK(d_true(p) == doctest::Approx(p.eps2() * (1.0 + b_zero(p))).epsilon(1e-15));
  const std::vector<double> grid{0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0};
  const auto c = noise_curve(p, g, grid);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(c.value[i] < c.value[i - 1]);
  CHECK(c.value[3] == noise_strength_delta(p, g, 1.0));
  // the same S in the large-time limit for any duration law
  CHECK(noise_strength_delta(p, IntertradeDist::exponential(), 1000.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cross volatility and the Epps curve") {
  const auto p = ModelParams::make(0.1, 0.0, 4.0);
  const auto g = IntertradeDist::ggd(0.8, 2.0 / 3.0);
  for (double delta : {0.3, 1.0, 5.0})
    CHECK(cross_vol(p, g, {0.0}, delta) == doctest::Approx(volatility_density(p, g, delta)).epsilon(1e-12));
  CHECK(DelayKernel{0.7}.spectrum(0.0) == 1.0);
  CHECK(DelayKernel{0.7}.spectrum(1.3) == DelayKernel{0.7}.spectrum(-1.3));

  const std::vector<double> grid{0.01, 0.1, 0.5, 1.0, 5.0, 20.0, 100.0, 1000.0};
  const auto e0 = epps_curve(p, g, {0.0}, grid);
  const auto n0 = noise_curve(p, g, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(e0.value[i] == doctest::Approx(n0.value[i]).epsilon(1e-12));

  std::vector<CorrelationCurve> fam;
  for (double lam : {1.0, 2.0, 3.0}) fam.push_back(epps_curve(p, g, {lam}, grid));
  for (const auto& c : fam) {
    CHECK(c.value.front() < 0.01);
    CHECK(c.value.back() == doctest::Approx(1.0).epsilon(0.01));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(c.value[i] > c.value[i - 1]);
    for (double v : c.value) CHECK((v >= 0.0 && v <= 1.0 + 1e-6));
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    CHECK(fam[0].value[i] > fam[1].value[i]);
    CHECK(fam[1].value[i] > fam[2].value[i]);
  }
  for (double d : {0.1, 0.3, 1.0}) CHECK(cross_vol(p, g, {1.0}, d) < cross_vol(p, g, {1.0}, 3 * d));
}

TEST_CASE("spectral and time-domain cross volatility agree") {
  const auto e = IntertradeDist::exponential();
  struct Spot {
    double q, lambda, delta;
  };
  for (const Spot s : {Spot{0.1, 1.0, 0.1}, Spot{0.1, 1.0, 1.0}, Spot{0.2, 2.0, 0.5}, Spot{0.2, 0.5, 3.0},
                       Spot{0.3, 3.0, 10.0}}) {
    const auto p = ModelParams::make(0.1, s.q, 4.0);
    INFO("q=" << s.q << " lambda=" << s.lambda << " delta=" << s.delta);
    CHECK(std::abs(cross_vol(p, e, {s.lambda}, s.delta) - cross_vol_time_domain(p, s.delta, s.lambda)) < 1e-5);
  }
}

TEST_CASE("parallel grid evaluation is bitwise serial") {
  const auto p = ModelParams::make(0.2, 0.1, 5.0);
  const auto g = IntertradeDist::weibull(0.8);
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(0.05 * std::pow(1.8, i));
  const auto a = epps_curve(p, g, {1.5}, grid, {}, 1);
  const auto b = epps_curve(p, g, {1.5}, grid, {}, 4);
  CHECK(a.value == b.value);
  const auto c = noise_curve(p, g, grid, {}, 1);
  const auto d = noise_curve(p, g, grid, {}, 3);
  CHECK(c.value == d.value);
}
