#include "msm/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "msm/error.hpp"

namespace msm {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// zeta(k) for k = 2..31.
constexpr std::array<double, 30> kZeta = {
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915, 1.0369277551433699263,
    1.0173430619844491397, 1.0083492773819228268, 1.0040773561979443394, 1.0020083928260822144,
    1.0009945751278180853, 1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519, 1.0000076371976378998,
    1.0000038172932649998, 1.0000019082127165539, 1.0000009539620338728, 1.0000004769329867878,
    1.0000002384505027277, 1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248, 1.0000000018626597235,
    1.0000000009313274324, 1.0000000004656629065};

// ln Gamma(1 + e) for |e| <= 0.2 from the zeta-series, which keeps full
// relative accuracy near the zeros at x = 1 and x = 2.
double log_gamma_1p_taylor(double e) {
  double sum = 0.0;
  double pw = e;
  for (std::size_t k = 0; k < kZeta.size(); ++k) {
    pw *= -e;
    const double n = static_cast<double>(k + 2);
    sum += kZeta[k] * pw / n;
  }
  // pw = -(-e)^n, so the accumulated sum is the negated zeta tail.
  return -kEulerGamma * e - sum;
}

// Lanczos approximation (g = 607/128, 15 terms), valid for x >= 0.5.
double log_gamma_lanczos(double x) {
  static constexpr std::array<double, 15> c = {
      0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
      14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
      .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
      -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
      .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};
  constexpr double g = 607.0 / 128.0;
  const double xm1 = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 15; ++i) a += c[static_cast<std::size_t>(i)] / (xm1 + i);
  const double t = xm1 + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(a);
}

double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 100'000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17)
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  throw NonConvergenceError("gamma_p: series did not converge");
}

double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  const double log_pref = -x + a * std::log(x) - log_gamma(a);
  if (log_pref < -760.0) return 0.0;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100'000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 4.0 * std::numeric_limits<double>::epsilon()) return std::exp(log_pref) * h;
  }
  throw NonConvergenceError("gamma_q: continued fraction did not converge");
}

void check_incomplete_args(double a, double x, const char* where) {
  if (!(a > 0.0) || !std::isfinite(a)) detail::domain_fail(where, "shape a must be > 0");
  if (!(x >= 0.0)) detail::domain_fail(where, "argument x must be >= 0");
}

bool is_nonpositive_integer(double b) { return b <= 0.0 && b == std::floor(b); }

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0)) detail::domain_fail("SeriesControl", "rel_tol must be > 0");
  if (max_terms < 1) detail::domain_fail("SeriesControl", "max_terms must be >= 1");
  if (!(z_max > 0.0)) detail::domain_fail("SeriesControl", "z_max must be > 0");
}

double SeriesResult::rounding_bound() const {
  return 4.0 * std::numeric_limits<double>::epsilon() * max_term *
         std::sqrt(static_cast<double>(terms + 1));
}

double log_gamma(double x) {
  if (!(x > 0.0)) detail::domain_fail("log_gamma", "x must be > 0, got " + std::to_string(x));
  if (std::isinf(x)) return x;
  if (std::abs(x - 1.0) <= 0.2) return log_gamma_1p_taylor(x - 1.0);
  if (std::abs(x - 2.0) <= 0.2) return std::log1p(x - 2.0) + log_gamma_1p_taylor(x - 2.0);
  if (x < 0.8) return log_gamma(x + 1.0) - std::log(x);
  return log_gamma_lanczos(x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double gamma_p(double a, double x) {
  check_incomplete_args(a, x, "gamma_p");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_incomplete_args(a, x, "gamma_q");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double upper_incomplete_gamma(double a, double x) {
  check_incomplete_args(a, x, "upper_incomplete_gamma");
  return gamma_q(a, x) * gamma_fn(a);
}

SeriesResult gen_hypergeometric(std::span<const double> a, std::span<const double> b, Complex z,
                                const SeriesControl& ctl) {
  ctl.validate();
  if (a.size() > b.size())
    detail::domain_fail("gen_hypergeometric",
                        "only p <= q (entire) series are supported, got p=" +
                            std::to_string(a.size()) + " q=" + std::to_string(b.size()));
  for (double bj : b)
    if (is_nonpositive_integer(bj))
      detail::domain_fail("gen_hypergeometric", "lower parameter is a non-positive integer");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    detail::domain_fail("gen_hypergeometric", "argument is not finite");
  if (std::abs(z) > ctl.z_max)
    detail::domain_fail("gen_hypergeometric", "|z| = " + std::to_string(std::abs(z)) +
                                                  " exceeds the series envelope " +
                                                  std::to_string(ctl.z_max));

  SeriesResult r;
  Complex term = 1.0;
  Complex sum = 1.0;
  r.max_term = 1.0;
  int small_in_a_row = 0;
  for (int n = 0; n < ctl.max_terms; ++n) {
    double ratio = 1.0 / (n + 1.0);
    for (double ai : a) ratio *= ai + n;
    for (double bj : b) ratio /= bj + n;
    term *= ratio * z;
    sum += term;
    r.max_term = std::max(r.max_term, std::abs(term));
    r.terms = n + 2;
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++small_in_a_row == 2) {
        r.value = sum;
        return r;
      }
    } else {
      small_in_a_row = 0;
    }
  }
  throw NonConvergenceError("gen_hypergeometric: " + std::to_string(ctl.max_terms) +
                            " terms without meeting the stopping rule");
}

SeriesResult kummer_phi(double a, double b, Complex z, const SeriesControl& ctl) {
  if (z.real() >= 0.0) {
    const std::array<double, 1> av{a};
    const std::array<double, 1> bv{b};
    return gen_hypergeometric(av, bv, z, ctl);
  }
  // Kummer's transformation moves the series to Re z > 0, where the terms
  // no longer cancel against a small result.
  if (is_nonpositive_integer(b))
    detail::domain_fail("kummer_phi", "lower parameter is a non-positive integer");
  const std::array<double, 1> av{b - a};
  const std::array<double, 1> bv{b};
  SeriesResult r = gen_hypergeometric(av, bv, -z, ctl);
  const Complex scale = std::exp(z);
  r.value *= scale;
  r.max_term *= std::abs(scale);
  return r;
}

}  // namespace msm
