#pragma once
// Fractional Gaussian noise X_k of order d in (0, 1/2): MA coefficients,
// correlations and sample paths with unit variance.

#include <cstdint>
#include <vector>

namespace msm {

enum class PathMethod {
  // Exact Gaussian sequence via circulant embedding of the correlation
  // matrix (FFT).
  Circulant,
  // MA(J) convolution normalized by the truncated coefficient norm. The
  // tail mass beyond J must be below kMaTailBound.
  TruncatedMA,
};

inline constexpr double kMaTailBound = 1e-4;

struct ArfimaParams {
  double d = 0.45;
  int J = 10'000;
  PathMethod method = PathMethod::Circulant;

  static ArfimaParams from_alpha(double alpha);
  double alpha() const { return 1.0 - 2.0 * d; }
  void validate() const;
};

struct GaussianPath {
  std::vector<double> values;
  std::uint64_t seed = 0;
  ArfimaParams params;
};

// a_0..a_J of the MA(infinity) representation.
std::vector<double> ma_coefficients(double d, int J);

// Sum of all a_j^2, in closed form Gamma(1-2d) / Gamma(1-d)^2.
double ma_norm_squared(double d);

// Sum over j > J of a_j^2.
double ma_tail_mass(double d, int J);

// rho_m = Gamma(1-d) Gamma(d+m) / (Gamma(d) Gamma(1-d+m)).
double correlation_exact(double d, long long m);

// Power-law form F(alpha) m^-alpha, F(alpha) = Gamma((1+alpha)/2) / Gamma((1-alpha)/2).
double correlation_powerlaw(double alpha, long long m);

// The prefactor F(alpha) of the power law.
double powerlaw_prefactor(double alpha);

GaussianPath sample_path(const ArfimaParams& params, std::size_t n, std::uint64_t seed);

}  // namespace msm
