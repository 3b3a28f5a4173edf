#include "msm/tick_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "msm/error.hpp"
#include "msm/quadrature.hpp"
#include "msm/random.hpp"
#include "msm/specfun.hpp"

namespace msm {
namespace {

void check_theta(double theta, const char* where) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    detail::domain_fail(where, "theta must be > 0, got " + std::to_string(theta));
}

void check_rho(double rho, const char* where) {
  if (!(std::abs(rho) <= 1.0)) detail::domain_fail(where, "need |rho| <= 1, got " + std::to_string(rho));
}

// Interior breakpoint where the (1 - rho sin u)^(-1-theta) peak begins.
double peak_start(double rho) {
  const double w = std::sqrt(2.0 * (1.0 - rho));
  return std::max(0.0, 0.5 * std::numbers::pi - w);
}

}  // namespace

void ModelParams::validate() const {
  arfima.validate();
  bounce.validate();
  amplitude.validate();
}

double ModelParams::eps2() const { return inverse_moment(2.0, amplitude); }

double ModelParams::gamma_factor() const {
  const double e1 = inverse_moment(1.0, amplitude);
  return powerlaw_prefactor(alpha()) * e1 * e1 / eps2();
}

ModelParams ModelParams::make(double alpha, double q, double mu, double b) {
  ModelParams p;
  p.arfima = ArfimaParams::from_alpha(alpha);
  p.bounce.q = q;
  p.amplitude = {mu, b};
  p.validate();
  return p;
}

TickSeries simulate_ticks(const ModelParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  if (n < 1) detail::domain_fail("simulate_ticks", "n must be >= 1");
  TickSeries t;
  t.gaussians = sample_path(p.arfima, n, child_seed(seed, Stream::Gaussian)).values;
  t.signs = sample_bounce(p.bounce.q, n, child_seed(seed, Stream::Bounce));
  t.amplitudes = sample_amplitude(p.amplitude, n, child_seed(seed, Stream::Amplitude));
  t.returns.resize(n);
  for (std::size_t k = 0; k < n; ++k) t.returns[k] = t.gaussians[k] * t.signs[k] / t.amplitudes[k];
  return t;
}

double tick_correlation(const ModelParams& p, long long m) {
  p.validate();
  if (m < 0) m = -m;
  const double e2 = p.eps2();
  if (m == 0) return e2;
  const double c = bounce_corr(p.q(), m);
  if (c == 0.0) return 0.0;
  return e2 * c * p.gamma_factor() * std::pow(static_cast<double>(m), -p.alpha());
}

double tick_correlation_exact(const ModelParams& p, long long m) {
  p.validate();
  if (m < 0) m = -m;
  if (m == 0) return p.eps2();
  const double e1 = inverse_moment(1.0, p.amplitude);
  return e1 * e1 * bounce_corr(p.q(), m) * correlation_exact(p.arfima.d, m);
}

double f_theta_zero(double theta) {
  check_theta(theta, "f_theta_zero");
  return std::exp(theta * std::log(2.0) + 2.0 * log_gamma(0.5 * (1.0 + theta))) / std::numbers::pi;
}

double f_theta_one(double theta) {
  check_theta(theta, "f_theta_one");
  return std::exp(theta * std::log(2.0) + log_gamma(0.5 + theta)) / std::sqrt(std::numbers::pi);
}

double f_one_rho(double rho) {
  check_rho(rho, "f_one_rho");
  return 2.0 / std::numbers::pi * (std::sqrt(1.0 - rho * rho) + rho * std::asin(rho));
}

double f_tilde(double theta, double rho) {
  check_theta(theta, "f_tilde");
  check_rho(rho, "f_tilde");
  rho = std::abs(rho);
  if (rho == 0.0) return 0.0;
  if (rho == 1.0) return f_theta_one(theta) - f_theta_zero(theta);
  const double lead = (0.5 + theta) * (rho < 0.5 ? std::log1p(-rho * rho) : std::log((1.0 - rho) * (1.0 + rho)));
  // The two branches (1 - rho^2)^(1/2+theta) (1 +- rho s)^(-1-theta) - 1 are
  // summed as 2 [e^S cosh D - 1] = 2 [expm1(S) cosh D + 2 sinh^2(D/2)], with
  // S the mean and D the half-difference of the logs. Every piece is O(rho^2),
  // so nothing of lower order has to cancel.
  auto integrand = [&](double u) {
    const double s = std::sin(u), x = rho * s;
    // 1 - rho sin u = (1 - rho) + 2 rho sin^2(pi/4 - u/2), free of cancellation near the peak
    const double h = std::sin(0.25 * std::numbers::pi - 0.5 * u);
    const double lm = (1.0 - rho) + 2.0 * rho * h * h;
    const double log_prod = x < 0.5 ? std::log1p(-x * x) : std::log(lm * (1.0 + x));
    const double at = x < 0.5 ? std::atanh(x) : 0.5 * std::log((1.0 + x) / lm);
    const double S = lead - 0.5 * (1.0 + theta) * log_prod;
    const double D = (1.0 + theta) * at;
    const double sh = std::sinh(0.5 * D);
    return 2.0 * (std::expm1(S) * std::cosh(D) + 2.0 * sh * sh) * std::pow(s, theta);
  };
  const double bp[] = {peak_start(rho)};
  const auto r = quad::integrate_or_throw<double>(integrand, 0.0, 0.5 * std::numbers::pi,
                                                  {1e-300, 1e-12, 4000}, "f_theta_rho", bp);
  return std::exp(log_gamma(1.0 + theta)) / std::numbers::pi * r.value;
}

double f_theta_rho(double theta, double rho) {
  check_theta(theta, "f_theta_rho");
  check_rho(rho, "f_theta_rho");
  if (std::abs(rho) == 1.0) return f_theta_one(theta);
  return f_theta_zero(theta) + f_tilde(theta, rho);
}

double g_theta(double theta) {
  check_theta(theta, "g_theta");
  return std::exp(log_gamma(0.5 * (1.0 + theta)) + log_gamma(theta) - log_gamma(0.5 * theta)) /
         std::sqrt(std::numbers::pi) * theta * theta;
}

double quadratic_approx(double theta, double rho) { return g_theta(theta) * rho * rho; }

namespace {

// eps_2theta F(theta,1) - eps_theta^2 F(theta,0), the denominator of A_m.
double abs_return_denominator(const ModelParams& p, double theta) {
  const double et = inverse_moment(theta, p.amplitude);
  const double e2t = inverse_moment(2.0 * theta, p.amplitude);
  return e2t * f_theta_one(theta) - et * et * f_theta_zero(theta);
}

void check_abs_theta(const ModelParams& p, double theta) {
  check_theta(theta, "abs_return_corr");
  if (!(2.0 * theta < p.amplitude.mu))
    detail::domain_fail("abs_return_corr", "need theta < mu/2 so that E|r|^(2 theta) exists, got theta=" +
                                               std::to_string(theta) + " mu=" + std::to_string(p.amplitude.mu));
}

}  // namespace

double abs_return_chi(const ModelParams& p, double theta) {
  p.validate();
  check_abs_theta(p, theta);
  const double et = inverse_moment(theta, p.amplitude);
  const double f = powerlaw_prefactor(p.alpha());
  return f * f * g_theta(theta) * et * et / abs_return_denominator(p, theta);
}

double abs_return_corr(const ModelParams& p, double theta, long long m, CorrMode mode) {
  p.validate();
  check_abs_theta(p, theta);
  if (m < 0) m = -m;
  if (m == 0) return 1.0;
  if (mode == CorrMode::Approx)
    return abs_return_chi(p, theta) * std::pow(static_cast<double>(m), -p.sigma());
  const double et = inverse_moment(theta, p.amplitude);
  const double rho = correlation_exact(p.arfima.d, m);
  return et * et * f_tilde(theta, rho) / abs_return_denominator(p, theta);
}

CorrelationCurve lambda_shape(const ModelParams& p, std::span<const double> theta_grid, long long m,
                              CorrMode mode) {
  if (m < 1) detail::domain_fail("lambda_shape", "lag m must be >= 1");
  if (theta_grid.empty()) detail::domain_fail("lambda_shape", "theta grid is empty");
  CorrelationCurve c;
  c.name = "Lambda";
  c.abscissa.assign(theta_grid.begin(), theta_grid.end());
  c.value.reserve(theta_grid.size());
  for (double th : theta_grid) c.value.push_back(abs_return_corr(p, th, m, mode));
  const double peak = *std::max_element(c.value.begin(), c.value.end());
  if (!(peak > 0.0)) throw DegenerateError("lambda_shape: correlation is not positive on the grid");
  for (double& v : c.value) v /= peak;
  return c;
}

}  // namespace msm
