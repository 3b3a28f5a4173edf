#pragma once
// Inter-trade duration laws scaled to unit mean: exponential, Weibull and
// generalized gamma (GGD). The GGD density in the unit-scale variable x is
//   g(x) = beta x^(vartheta-1) exp(-x^beta) / Gamma(vartheta/beta),
// and durations are tau = x / lambda with lambda fixed by E[tau] = 1.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "msm/specfun.hpp"

namespace msm {

enum class DistKind { Exponential, Weibull, GGD };

struct IntertradeDist {
  DistKind kind = DistKind::Exponential;
  double vartheta = 1.0;
  double beta = 1.0;
  double lambda = 1.0;

  static IntertradeDist exponential();
  static IntertradeDist weibull(double beta);
  static IntertradeDist ggd(double vartheta, double beta);

  void validate() const;
  std::string describe() const;
};

// lambda such that the mean duration is 1.
double normalize_scale(const IntertradeDist& dist);

double density(const IntertradeDist& dist, double tau);
double survival(const IntertradeDist& dist, double tau);

std::vector<double> sample_durations(const IntertradeDist& dist, std::size_t n, std::uint64_t seed);

enum class LaplaceMethod {
  Auto,
  // Closed form (exponential, or GGD with beta in {1/2, 1/3, 2/3}).
  Analytic,
  // Power series in (s/lambda)^-beta, valid for beta < 1.
  Series,
  // Adaptive quadrature of the defining integral.
  Numeric,
};

struct LaplaceResult {
  Complex value;
  LaplaceMethod method = LaplaceMethod::Auto;
  // Rounding bound for series branches, quadrature error for Numeric.
  double error_bound = 0.0;
};

// Absolute accuracy that the Auto policy demands of a series branch
// before trusting it over quadrature.
inline constexpr double kLaplaceSeriesTolerance = 1e-11;

// f^(s) = E[exp(-s tau)] for Re s >= 0.
LaplaceResult laplace_image(const IntertradeDist& dist, Complex s,
                            LaplaceMethod method = LaplaceMethod::Auto);

inline Complex laplace(const IntertradeDist& dist, Complex s) { return laplace_image(dist, s).value; }

// True when a closed form exists for this law.
bool has_analytic_laplace(const IntertradeDist& dist);

}  // namespace msm
