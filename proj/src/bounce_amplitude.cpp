#include "msm/bounce_amplitude.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "msm/error.hpp"
#include "msm/random.hpp"
#include "msm/specfun.hpp"

namespace msm {
namespace {

void check_q(double q, const char* where) {
  if (!(q >= 0.0 && q <= 1.0))
    detail::domain_fail(where, "bounce probability q must lie in [0, 1], got " + std::to_string(q));
}

}  // namespace

void BounceParams::validate() const { check_q(q, "BounceParams"); }

double BounceParams::q_tilde() const {
  validate();
  const double c = std::abs(2.0 * q - 1.0);
  if (c == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(c);
}

void AmplitudeParams::validate() const {
  if (!(mu > 2.0) || !std::isfinite(mu))
    detail::domain_fail("AmplitudeParams", "tail exponent mu must be > 2, got " + std::to_string(mu));
  if (!(b > 0.0) || !std::isfinite(b))
    detail::domain_fail("AmplitudeParams", "scale b must be > 0, got " + std::to_string(b));
}

double bounce_corr(double q, long long m) {
  check_q(q, "bounce_corr");
  if (m < 0) m = -m;
  if (m == 0) return 1.0;
  return std::pow(2.0 * q - 1.0, static_cast<double>(m));
}

double bounce_corr_two_branch(double q, long long m) {
  check_q(q, "bounce_corr_two_branch");
  if (m < 0) m = -m;
  if (m == 0) return 1.0;
  if (q == 0.5) return 0.0;
  const double mag = std::exp(-BounceParams{q}.q_tilde() * static_cast<double>(m));
  return (q < 0.5 && m % 2 == 1) ? -mag : mag;
}

std::vector<int> sample_bounce(double q, std::size_t n, std::uint64_t seed) {
  check_q(q, "sample_bounce");
  Rng rng = make_rng(seed);
  std::vector<int> out(n);
  int sign = uniform_open(rng) < 0.5 ? -1 : 1;
  for (std::size_t k = 0; k < n; ++k) {
    // iota = 1 (a flip) with probability 1 - q.
    if (uniform_open(rng) >= q) sign = -sign;
    out[k] = sign;
  }
  return out;
}

std::vector<double> sample_amplitude(const AmplitudeParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  Rng rng = make_rng(seed);
  std::vector<double> out(n);
  const double half_mu = 0.5 * p.mu;
  for (auto& h : out) h = std::sqrt(2.0 * standard_gamma(rng, half_mu)) / p.b;
  return out;
}

double amplitude_pdf(double eta, const AmplitudeParams& p) {
  p.validate();
  if (!(eta > 0.0) || std::isinf(eta)) return 0.0;
  const double lognorm = std::log(2.0) + p.mu * std::log(p.b) - 0.5 * p.mu * std::log(2.0) -
                         log_gamma(0.5 * p.mu);
  return std::exp(lognorm + (p.mu - 1.0) * std::log(eta) - 0.5 * p.b * p.b * eta * eta);
}

double amplitude_cdf(double eta, const AmplitudeParams& p) {
  p.validate();
  if (!(eta > 0.0)) return 0.0;
  return gamma_p(0.5 * p.mu, 0.5 * p.b * p.b * eta * eta);
}

double inverse_moment(double theta, const AmplitudeParams& p) {
  p.validate();
  if (!(theta >= 0.0) || !(theta < p.mu))
    detail::domain_fail("inverse_moment", "need 0 <= theta < mu for a finite moment, got theta=" +
                                              std::to_string(theta) + " mu=" + std::to_string(p.mu));
  if (theta == 0.0) return 1.0;
  return std::exp(theta * std::log(p.b) - 0.5 * theta * std::log(2.0) +
                  log_gamma(0.5 * (p.mu - theta)) - log_gamma(0.5 * p.mu));
}

double student_pdf(double r, const AmplitudeParams& p) {
  // The density itself exists for any mu > 0, so only positivity is checked.
  if (!(p.mu > 0.0) || !(p.b > 0.0))
    detail::domain_fail("student_pdf", "need mu > 0 and b > 0");
  const double x = r / p.b;
  const double lognorm = log_gamma(0.5 * (p.mu + 1.0)) - log_gamma(0.5 * p.mu) -
                         0.5 * std::log(std::numbers::pi) - std::log(p.b);
  return std::exp(lognorm - 0.5 * (p.mu + 1.0) * std::log1p(x * x));
}

}  // namespace msm
