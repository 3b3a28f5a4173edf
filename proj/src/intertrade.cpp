#include "msm/intertrade.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "msm/error.hpp"
#include "msm/quadrature.hpp"
#include "msm/random.hpp"

namespace msm {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool near(double a, double b) { return std::abs(a - b) < 1e-14; }

// Solves Q(tau) = target for the unit-scale argument y = x^beta, i.e.
// gamma_q(shape, y) = target.
double gamma_q_inverse(double shape, double target) {
  double lo = 0.0, hi = 1.0;
  while (gamma_q(shape, hi) > target) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gamma_q(shape, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

// The closed forms may cancel between groups, so each series is summed to
// full precision rather than to the default relative tolerance.
const SeriesControl kClosedForm{1e-17, 10'000, 50.0};

struct Partial {
  Complex value;
  double bound;
};

// Accumulates one group of the closed forms: coeff times a series value.
void add_group(Partial& acc, Complex coeff, const SeriesResult& r) {
  const Complex v = coeff * r.value;
  acc.value += v;
  acc.bound += std::abs(coeff) * (r.rounding_bound() + 2.0 * kClosedForm.rel_tol * std::abs(r.value)) +
               4.0 * kEps * std::abs(v);
}

Partial laplace_ggd_half(double th, Complex s) {
  const double g = gamma_fn(2.0 * th);
  Partial acc{0.0, 0.0};
  for (int k = 0; k <= 1; ++k) {
    const double a = 0.5 * k + th;
    const double b = (2.0 * k + 1.0) / 2.0;
    const auto r = kummer_phi(a, b, 1.0 / (4.0 * s), kClosedForm);
    const Complex coeff = (k % 2 ? -1.0 : 1.0) * gamma_fn(th + 0.5 * k) *
                          std::pow(s, -th - 0.5 * k) / (2.0 * g);
    add_group(acc, coeff, r);
  }
  return acc;
}

double b1_of(int k) { return ((2.0 * k + 1.0) * (2.0 * k + 1.0) + 7.0) / 24.0; }
double b2_of(int k) { return (41.0 - (2.0 * k - 5.0) * (2.0 * k - 5.0)) / 24.0; }
double two_pow_of(int k) { return std::pow(2.0, (k + 1.0) * (2.0 - k) / 2.0); }

Partial laplace_ggd_third(double th, Complex s) {
  const double g = gamma_fn(3.0 * th);
  Partial acc{0.0, 0.0};
  for (int k = 0; k <= 2; ++k) {
    const std::array<double, 1> a{th + k / 3.0};
    const std::array<double, 2> b{b1_of(k), b2_of(k)};
    const auto r = gen_hypergeometric(a, b, -1.0 / (27.0 * s), kClosedForm);
    const Complex coeff = (k % 2 ? -1.0 : 1.0) * two_pow_of(k) * gamma_fn(th + k / 3.0) *
                          std::pow(s, -th - k / 3.0) / (6.0 * g);
    add_group(acc, coeff, r);
  }
  return acc;
}

Partial laplace_ggd_two_thirds(double th, Complex s) {
  const double g = gamma_fn(1.5 * th);
  Partial acc{0.0, 0.0};
  for (int k = 0; k <= 2; ++k) {
    const double a1 = ((6.0 * k - 5.0) * (6.0 * k - 5.0) + 47.0) / 144.0;
    const double a2 = k * (13.0 - 3.0 * k) / 12.0;
    const std::array<double, 2> a{0.5 * th + a1, 0.5 * th + a2};
    const std::array<double, 2> b{b1_of(k), b2_of(k)};
    const auto r = gen_hypergeometric(a, b, -4.0 / (27.0 * s * s), kClosedForm);
    const Complex coeff = (k % 2 ? -1.0 : 1.0) * two_pow_of(k) * gamma_fn(th + 2.0 * k / 3.0) *
                          std::pow(s, -th - 2.0 * k / 3.0) / (3.0 * g);
    add_group(acc, coeff, r);
  }
  return acc;
}

// Sum over n of (-1)^n Gamma(th + n beta)/n! sigma^-(th + n beta), times
// beta/Gamma(th/beta). Converges for beta < 1.
Partial laplace_power_series(double th, double beta, Complex sigma) {
  const double logr = std::log(std::abs(sigma));
  const double arg = std::arg(sigma);
  const double lg0 = std::log(beta) - log_gamma(th / beta);
  Complex sum = 0.0;
  double max_term = 0.0;
  int small = 0;
  for (int n = 0; n < 20'000; ++n) {
    const double p = th + n * beta;
    const double logmag = lg0 + log_gamma(p) - log_gamma(n + 1.0) - p * logr;
    const double mag = std::exp(logmag);
    const Complex term = std::polar(n % 2 ? -mag : mag, -p * arg);
    sum += term;
    max_term = std::max(max_term, mag);
    if (n > 0 && mag <= 1e-17 * std::abs(sum) && mag < max_term) {
      if (++small == 2) return {sum, 4.0 * kEps * max_term * std::sqrt(n + 1.0)};
    } else {
      small = 0;
    }
    if (!std::isfinite(mag)) break;
  }
  throw NonConvergenceError("laplace_image: power series did not converge");
}

LaplaceResult laplace_numeric(const IntertradeDist& dist, Complex s) {
  const double th = dist.vartheta, beta = dist.beta;
  const Complex sigma = s / dist.lambda;
  // With u = x^th the density becomes (beta/th) exp(-u^(beta/th)) / Gamma(th/beta),
  // bounded and smooth at the origin.
  const double shape = th / beta;
  const double ymax = gamma_q_inverse(shape, 1e-13);
  const double umax = std::pow(ymax, th / beta);
  const double pref = beta / th / gamma_fn(shape);
  auto integrand = [&](double u) -> Complex {
    const double x = std::pow(u, 1.0 / th);
    return pref * std::exp(-std::pow(u, beta / th) - sigma * x);
  };
  // Breakpoints at half periods of the oscillation exp(-i Im(sigma) x).
  std::vector<double> bps;
  const double w = std::abs(sigma.imag());
  if (w > 0.0) {
    const double xmax = std::pow(umax, 1.0 / th);
    const double nhalf = std::floor(w * xmax / std::numbers::pi);
    if (nhalf > 2e5)
      throw QuadratureError("laplace_image: " + std::to_string(nhalf) +
                            " half periods exceed the numeric branch budget");
    for (double k = 1.0; k <= nhalf; k += 1.0) bps.push_back(std::pow(k * std::numbers::pi / w, th));
  }
  // Large vartheta/beta squeezes the mass into a narrow peak in u, and a
  // large |sigma| pulls it toward the origin; seed the subdivision at
  // quantiles of y = x^beta ~ Gamma(shape) and at |sigma| x in {0.1, 1, 10}.
  for (double pr : {1e-9, 1e-6, 1e-3, 0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.98, 0.999, 1.0 - 1e-6})
    bps.push_back(std::pow(gamma_q_inverse(shape, pr), th / beta));
  if (std::abs(sigma) > 0.0)
    for (double k : {0.1, 1.0, 10.0}) bps.push_back(std::pow(k / std::abs(sigma), th));
  quad::Tolerance tol{1e-14, 1e-12, static_cast<int>(bps.size()) + 4000};
  const auto r = quad::integrate_or_throw<Complex>(integrand, 0.0, umax, tol, "laplace_image", bps);
  return {r.value, LaplaceMethod::Numeric, r.error + 1e-13};
}

}  // namespace

IntertradeDist IntertradeDist::exponential() {
  IntertradeDist d;
  d.kind = DistKind::Exponential;
  d.lambda = 1.0;
  return d;
}

IntertradeDist IntertradeDist::weibull(double beta) {
  IntertradeDist d;
  d.kind = DistKind::Weibull;
  d.beta = beta;
  d.vartheta = beta;
  d.validate();
  d.lambda = normalize_scale(d);
  return d;
}

IntertradeDist IntertradeDist::ggd(double vartheta, double beta) {
  IntertradeDist d;
  d.kind = DistKind::GGD;
  d.beta = beta;
  d.vartheta = vartheta;
  d.validate();
  d.lambda = normalize_scale(d);
  return d;
}

void IntertradeDist::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta))
    detail::domain_fail("IntertradeDist", "beta must be > 0, got " + std::to_string(beta));
  if (!(vartheta > 0.0) || !std::isfinite(vartheta))
    detail::domain_fail("IntertradeDist", "vartheta must be > 0, got " + std::to_string(vartheta));
  if (kind == DistKind::Exponential && (beta != 1.0 || vartheta != 1.0))
    detail::domain_fail("IntertradeDist", "exponential law has vartheta = beta = 1");
  if (kind == DistKind::Weibull && vartheta != beta)
    detail::domain_fail("IntertradeDist", "Weibull law has vartheta = beta");
  if (!(lambda > 0.0)) detail::domain_fail("IntertradeDist", "scale lambda must be > 0");
}

std::string IntertradeDist::describe() const {
  std::ostringstream os;
  switch (kind) {
    case DistKind::Exponential: os << "exponential"; break;
    case DistKind::Weibull: os << "weibull(beta=" << beta << ")"; break;
    case DistKind::GGD: os << "ggd(vartheta=" << vartheta << ", beta=" << beta << ")"; break;
  }
  return os.str();
}

double normalize_scale(const IntertradeDist& dist) {
  switch (dist.kind) {
    case DistKind::Exponential: return 1.0;
    case DistKind::Weibull: return gamma_fn((1.0 + dist.beta) / dist.beta);
    case DistKind::GGD:
      return std::exp(log_gamma((1.0 + dist.vartheta) / dist.beta) - log_gamma(dist.vartheta / dist.beta));
  }
  return 1.0;
}

double density(const IntertradeDist& dist, double tau) {
  dist.validate();
  if (!(tau > 0.0)) return 0.0;
  const double x = dist.lambda * tau;
  return dist.lambda * std::exp(std::log(dist.beta) + (dist.vartheta - 1.0) * std::log(x) -
                                std::pow(x, dist.beta) - log_gamma(dist.vartheta / dist.beta));
}

double survival(const IntertradeDist& dist, double tau) {
  dist.validate();
  if (!(tau >= 0.0)) detail::domain_fail("survival", "tau must be >= 0");
  if (tau == 0.0) return 1.0;
  const double y = std::pow(dist.lambda * tau, dist.beta);
  if (dist.kind != DistKind::GGD) return std::exp(-y);
  return gamma_q(dist.vartheta / dist.beta, y);
}

std::vector<double> sample_durations(const IntertradeDist& dist, std::size_t n, std::uint64_t seed) {
  dist.validate();
  Rng rng = make_rng(seed);
  std::vector<double> out(n);
  const double shape = dist.vartheta / dist.beta;
  const double inv_beta = 1.0 / dist.beta;
  for (auto& t : out) {
    if (dist.kind == DistKind::GGD) {
      t = std::pow(standard_gamma(rng, shape), inv_beta) / dist.lambda;
    } else {
      // Weibull and exponential invert the survival function directly.
      t = std::pow(-std::log(uniform_open(rng)), inv_beta) / dist.lambda;
    }
  }
  return out;
}

bool has_analytic_laplace(const IntertradeDist& dist) {
  if (dist.kind == DistKind::Exponential) return true;
  if (dist.kind == DistKind::Weibull) return near(dist.beta, 1.0);
  return near(dist.beta, 0.5) || near(dist.beta, 1.0 / 3.0) || near(dist.beta, 2.0 / 3.0) ||
         (near(dist.beta, 1.0) && near(dist.vartheta, 1.0));
}

LaplaceResult laplace_image(const IntertradeDist& dist, Complex s, LaplaceMethod method) {
  dist.validate();
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
    detail::domain_fail("laplace_image", "argument is not finite");
  if (s.real() < 0.0) detail::domain_fail("laplace_image", "need Re(s) >= 0");
  if (s == Complex(0.0)) return {1.0, method == LaplaceMethod::Auto ? LaplaceMethod::Analytic : method, 0.0};

  const bool exponential = dist.kind == DistKind::Exponential ||
                           (near(dist.beta, 1.0) && near(dist.vartheta, 1.0));
  const Complex sigma = s / dist.lambda;
  auto analytic = [&]() -> LaplaceResult {
    if (exponential) return {1.0 / (1.0 + sigma), LaplaceMethod::Analytic, 4.0 * kEps};
    Partial p;
    if (near(dist.beta, 0.5)) p = laplace_ggd_half(dist.vartheta, sigma);
    else if (near(dist.beta, 1.0 / 3.0)) p = laplace_ggd_third(dist.vartheta, sigma);
    else if (near(dist.beta, 2.0 / 3.0)) p = laplace_ggd_two_thirds(dist.vartheta, sigma);
    else detail::domain_fail("laplace_image", "no closed form for " + dist.describe());
    return {p.value, LaplaceMethod::Analytic, p.bound};
  };
  auto series = [&]() -> LaplaceResult {
    if (!(dist.beta < 1.0))
      detail::domain_fail("laplace_image", "power series needs beta < 1, got " + dist.describe());
    const Partial p = laplace_power_series(dist.vartheta, dist.beta, sigma);
    return {p.value, LaplaceMethod::Series, p.bound};
  };

  switch (method) {
    case LaplaceMethod::Analytic: return analytic();
    case LaplaceMethod::Series: return series();
    case LaplaceMethod::Numeric: return laplace_numeric(dist, s);
    case LaplaceMethod::Auto: break;
  }
  if (exponential) return analytic();
  // Series branches are only trusted where their rounding bound is small;
  // near the origin their terms cancel and quadrature takes over.
  if (has_analytic_laplace(dist)) {
    try {
      const auto r = analytic();
      if (r.error_bound <= kLaplaceSeriesTolerance) return r;
    } catch (const DomainError&) {
    } catch (const NonConvergenceError&) {
    }
  }
  if (dist.beta < 1.0 && std::abs(sigma) > 1e-3) {
    try {
      const auto r = series();
      if (r.error_bound <= kLaplaceSeriesTolerance) return r;
    } catch (const NonConvergenceError&) {
    }
  }
  return laplace_numeric(dist, s);
}

}  // namespace msm
