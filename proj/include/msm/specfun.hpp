#pragma once
// Real and complex special functions used by the model's closed forms.

#include <complex>
#include <span>

namespace msm {

using Complex = std::complex<double>;

struct SeriesControl {
  double rel_tol = 1e-12;
  int max_terms = 10'000;
  // Series are only evaluated for |z| <= z_max.
  double z_max = 50.0;

  void validate() const;
};

// Outcome of a hypergeometric-type series. `max_term` is the largest
// |term| seen; max_term * machine epsilon bounds the rounding error
// caused by cancellation between terms.
struct SeriesResult {
  Complex value;
  int terms = 0;
  double max_term = 0.0;

  double rounding_bound() const;
};

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Gamma(x) for x > 0 (exp of log_gamma).
double gamma_fn(double x);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Unregularized upper incomplete gamma Gamma(a, x).
double upper_incomplete_gamma(double a, double x);

// Confluent hypergeometric (Kummer) function 1F1(a; b; z).
SeriesResult kummer_phi(double a, double b, Complex z, const SeriesControl& ctl = {});

// pFq(a; b; z) by direct summation. Only entire cases (p <= q) are
// accepted.
SeriesResult gen_hypergeometric(std::span<const double> a, std::span<const double> b, Complex z,
                                const SeriesControl& ctl = {});

}  // namespace msm
