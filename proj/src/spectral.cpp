#include "msm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "msm/error.hpp"
#include "msm/parallel.hpp"
#include "msm/quadrature.hpp"

namespace msm {
namespace {

constexpr double kPi = std::numbers::pi;

void check_spectral_q(const ModelParams& p, const char* where) {
  p.validate();
  if (p.q() > 0.5)
    detail::domain_fail(where, "calendar-time spectra need q in [0, 1/2], got " + std::to_string(p.q()));
}

void check_delta(double delta, const char* where) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    detail::domain_fail(where, "window Delta must be > 0, got " + std::to_string(delta));
}

// Breakpoints in u at which t = u^(1/alpha) passes a few reference values;
// the integrand switches from flat to exponentially small around t ~ 1.
std::vector<double> u_breakpoints(double alpha) {
  std::vector<double> bp;
  for (double t : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) bp.push_back(std::pow(t, alpha));
  return bp;
}

// -2 gamma / Gamma(1+alpha) times the integral over u of Re[z / (e^t + z)].
double b_integral(const ModelParams& p, Complex z, double u_cutoff) {
  if (z == Complex(0.0)) return 0.0;
  const double alpha = p.alpha();
  const double inv_alpha = 1.0 / alpha;
  const double umax = std::pow(std::log(u_cutoff), alpha);
  auto integrand = [&](double u) {
    const double t = std::pow(u, inv_alpha);
    if (t > 700.0) return 0.0;
    const Complex v = z / (std::exp(t) + z);
    return v.real();
  };
  const auto bp = u_breakpoints(alpha);
  const auto r =
      quad::integrate_or_throw<double>(integrand, 0.0, umax, {1e-16, 1e-12, 4000}, "b_spectrum", bp);
  return -2.0 * p.gamma_factor() / gamma_fn(1.0 + alpha) * r.value;
}

// 2 (1 - cos x) / x^2, the window kernel in x = omega Delta.
double window_kernel(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return 1.0 - x2 / 12.0 + x2 * x2 / 360.0;
  }
  const double s = std::sin(0.5 * x);
  return 4.0 * s * s / (x * x);
}

struct Spectral {
  const ModelParams& p;
  const IntertradeDist& dist;
  const QuadratureSpec& qs;
  double eps;  // 1 - 2q

  double b(double omega) const {
    if (eps == 0.0) return 0.0;
    const Complex f = laplace_image(dist, Complex(0.0, omega), qs.laplace).value;
    return b_integral(p, eps * f, qs.u_cutoff);
  }
};

// Integral over x of cos(freq x) h(x) on [X, inf), where
// h(x) = B~(x/Delta) g(x) / x^2. Up to 20 oscillations are integrated in
// the variable y = 1/x; the remainder is only bounded.
struct TailPart {
  double value;
  double error;
};

template <class H>
TailPart cos_tail(H& h, double X, double freq, double hmax, const QuadratureSpec& qs) {
  auto in_y = [&](double y) { return std::cos(freq / y) * h(1.0 / y) / (y * y); };
  if (freq == 0.0) {
    const auto r = quad::integrate_or_throw<double>(in_y, 0.0, 1.0 / X,
                                                    {qs.abs_tol * 1e-2, qs.rel_tol, 4000}, "tail");
    return {r.value, r.error};
  }
  const double X1 = X + 40.0 * kPi / freq;
  std::vector<double> bps;
  for (double k = std::ceil(freq * X / kPi); k * kPi / freq < X1; k += 1.0) bps.push_back(freq / (k * kPi));
  const auto r = quad::integrate_or_throw<double>(in_y, 1.0 / X1, 1.0 / X,
                                                  {qs.abs_tol * 1e-2, qs.rel_tol, 4000 + static_cast<int>(bps.size())},
                                                  "tail", bps);
  // By parts, the rest is at most about 2 max|B~| / (freq X1^2).
  return {r.value, r.error + 2.0 * hmax / (freq * X1 * X1)};
}

// I(Delta, tau, lambda) = (1/pi) int_0^inf K(x) B~(x/Delta) cos(c x)
//                         exp(-(x lambda/Delta)^2/2) dx,  c = tau/Delta.
double window_integral(const Spectral& sp, double delta, double tau, double lambda) {
  if (sp.eps == 0.0) return 0.0;
  const QuadratureSpec& qs = sp.qs;
  const double c = std::abs(tau) / delta;
  const double g_scale = lambda / delta;
  auto gauss = [&](double x) {
    const double a = x * g_scale;
    return std::exp(-0.5 * a * a);
  };
  auto main = [&](double x) {
    return window_kernel(x) * sp.b(x / delta) * std::cos(c * x) * gauss(x);
  };

  const double periods = std::max(20.0, std::round(qs.periods / (1.0 + c)));
  double X = 2.0 * kPi * periods;
  bool need_tail = true;
  if (g_scale > 0.0) {
    const double xcut = std::sqrt(80.0) / g_scale;
    if (xcut < X) {
      X = xcut;
      need_tail = false;
    }
  }

  std::vector<double> bps;
  const double step = 2.0 * kPi / std::max(1, qs.panels_per_period);
  for (double x = step; x < X; x += step) bps.push_back(x);
  if (c > 0.0)
    for (double x = kPi / c; x < X; x += kPi / c) bps.push_back(x);
  // Resolve the scale omega ~ 1 where B~ changes shape.
  for (double w : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0})
    if (w * delta < X) bps.push_back(w * delta);
  std::sort(bps.begin(), bps.end());

  quad::Tolerance tol{qs.abs_tol, qs.rel_tol, static_cast<int>(bps.size()) + 4000};
  const auto body = quad::integrate_or_throw<double>(main, 0.0, X, tol, "window integral", bps);
  double total = body.value;

  if (need_tail) {
    const double hmax = std::abs(sp.b(X / delta)) + std::abs(sp.b(2.0 * X / delta));
    auto h = [&](double x) { return sp.b(x / delta) * gauss(x) / (x * x); };
    // 2 (1 - cos x) cos(c x) = 2 cos(c x) - cos((1+c) x) - cos((1-c) x).
    const TailPart t0 = cos_tail(h, X, c, hmax, qs);
    const TailPart t1 = cos_tail(h, X, 1.0 + c, hmax, qs);
    const TailPart t2 = cos_tail(h, X, std::abs(1.0 - c), hmax, qs);
    total += 2.0 * t0.value - t1.value - t2.value;
  }
  return total / kPi;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) detail::domain_fail("QuadratureSpec", "tolerances must be > 0");
  if (periods < 1) detail::domain_fail("QuadratureSpec", "periods must be >= 1");
  if (panels_per_period < 1) detail::domain_fail("QuadratureSpec", "panels_per_period must be >= 1");
  if (!(u_cutoff > 1.0)) detail::domain_fail("QuadratureSpec", "u_cutoff must be > 1");
}

double DelayKernel::spectrum(double omega) const {
  const double a = omega * lambda;
  return std::exp(-0.5 * a * a);
}

double b_spectrum(const ModelParams& p, const IntertradeDist& dist, double omega,
                  const QuadratureSpec& qs) {
  check_spectral_q(p, "b_spectrum");
  qs.validate();
  if (!(omega >= 0.0) || !std::isfinite(omega))
    detail::domain_fail("b_spectrum", "need omega >= 0, got " + std::to_string(omega));
  const Spectral sp{p, dist, qs, 1.0 - 2.0 * p.q()};
  return sp.b(omega);
}

double b_zero(const ModelParams& p) {
  check_spectral_q(p, "b_zero");
  const double e = 1.0 - 2.0 * p.q();
  if (e == 0.0) return 0.0;
  const double alpha = p.alpha();
  const double umax = std::pow(std::log(1e16), alpha);
  auto integrand = [&](double u) {
    const double t = std::pow(u, 1.0 / alpha);
    return t > 700.0 ? 0.0 : 1.0 / (std::exp(t) + e);
  };
  const auto bp = u_breakpoints(alpha);
  const auto r = quad::integrate_or_throw<double>(integrand, 0.0, umax, {1e-16, 1e-13, 4000}, "b_zero", bp);
  return -2.0 * e * p.gamma_factor() / gamma_fn(1.0 + alpha) * r.value;
}

double triangle_spectrum(double delta, double omega) {
  check_delta(delta, "triangle_spectrum");
  return delta * delta * window_kernel(omega * delta);
}

double triangle(double delta, double tau) {
  check_delta(delta, "triangle");
  return std::max(delta - std::abs(tau), 0.0);
}

double k_delta(const ModelParams& p, const IntertradeDist& dist, double delta, double tau,
               const QuadratureSpec& qs) {
  check_spectral_q(p, "k_delta");
  check_delta(delta, "k_delta");
  qs.validate();
  const Spectral sp{p, dist, qs, 1.0 - 2.0 * p.q()};
  return p.eps2() * (triangle(delta, tau) + delta * window_integral(sp, delta, tau, 0.0));
}

double volatility_density(const ModelParams& p, const IntertradeDist& dist, double delta,
                          const QuadratureSpec& qs) {
  check_spectral_q(p, "volatility_density");
  check_delta(delta, "volatility_density");
  qs.validate();
  const Spectral sp{p, dist, qs, 1.0 - 2.0 * p.q()};
  return p.eps2() * (1.0 + window_integral(sp, delta, 0.0, 0.0));
}

double d_true(const ModelParams& p) { return p.eps2() * (1.0 + b_zero(p)); }

double noise_strength(const ModelParams& p) {
  const double denom = 1.0 + b_zero(p);
  if (!(denom > 0.0))
    throw DegenerateError("noise_strength: 1 + B(0) = " + std::to_string(denom) + " is not positive");
  return 1.0 / denom;
}

double noise_strength_delta(const ModelParams& p, const IntertradeDist& dist, double delta,
                            const QuadratureSpec& qs) {
  const double dt = d_true(p);
  if (!(dt > 0.0)) throw DegenerateError("noise_strength_delta: D_true is not positive");
  return volatility_density(p, dist, delta, qs) / dt;
}

double cross_vol(const ModelParams& p, const IntertradeDist& dist, const DelayKernel& kernel,
                 double delta, const QuadratureSpec& qs) {
  check_spectral_q(p, "cross_vol");
  check_delta(delta, "cross_vol");
  qs.validate();
  if (!(kernel.lambda >= 0.0)) detail::domain_fail("cross_vol", "delay scale lambda must be >= 0");
  const double lam = kernel.lambda;
  // (1/(pi Delta)) int exp(-w^2 lam^2/2) T~_Delta(w) dw, in closed form.
  double white = 1.0;
  if (lam > 0.0) {
    const double r = delta / lam;
    white = std::erf(r / std::numbers::sqrt2) -
            (2.0 / r) / std::sqrt(2.0 * kPi) * (-std::expm1(-0.5 * r * r));
  }
  const Spectral sp{p, dist, qs, 1.0 - 2.0 * p.q()};
  return p.eps2() * (white + window_integral(sp, delta, 0.0, lam));
}

CorrelationCurve epps_curve(const ModelParams& p, const IntertradeDist& dist,
                            const DelayKernel& kernel, std::span<const double> delta_grid,
                            const QuadratureSpec& qs, unsigned threads) {
  const double dt = d_true(p);
  if (!(dt > 0.0)) throw DegenerateError("epps_curve: D_true is not positive");
  CorrelationCurve c;
  c.name = "S12";
  c.abscissa.assign(delta_grid.begin(), delta_grid.end());
  c.value = parallel_map(delta_grid.size(), threads, [&](std::size_t i) {
    return cross_vol(p, dist, kernel, delta_grid[i], qs) / dt;
  });
  return c;
}

CorrelationCurve noise_curve(const ModelParams& p, const IntertradeDist& dist,
                             std::span<const double> delta_grid, const QuadratureSpec& qs,
                             unsigned threads) {
  const double dt = d_true(p);
  if (!(dt > 0.0)) throw DegenerateError("noise_curve: D_true is not positive");
  CorrelationCurve c;
  c.name = "S_delta";
  c.abscissa.assign(delta_grid.begin(), delta_grid.end());
  c.value = parallel_map(delta_grid.size(), threads, [&](std::size_t i) {
    return volatility_density(p, dist, delta_grid[i], qs) / dt;
  });
  return c;
}

}  // namespace msm
