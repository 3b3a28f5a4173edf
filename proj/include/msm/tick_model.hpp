#pragma once
// Tick returns r_k = X_k M_k / H_k and their tick-time statistics.

#include <cstdint>
#include <span>
#include <vector>

#include "msm/arfima.hpp"
#include "msm/bounce_amplitude.hpp"
#include "msm/curve.hpp"

namespace msm {

struct ModelParams {
  ArfimaParams arfima;
  BounceParams bounce;
  AmplitudeParams amplitude;

  void validate() const;
  double alpha() const { return arfima.alpha(); }
  double sigma() const { return 2.0 * alpha(); }
  double q() const { return bounce.q; }
  double eps2() const;
  // gamma = F(alpha) eps_1^2 / eps_2.
  double gamma_factor() const;

  static ModelParams make(double alpha, double q, double mu, double b = 1.0);
};

struct TickSeries {
  std::vector<double> returns;
  std::vector<int> signs;
  std::vector<double> amplitudes;
  std::vector<double> gaussians;
};

TickSeries simulate_ticks(const ModelParams& p, std::size_t n, std::uint64_t seed);

// K_m = eps_2 B_m with the power-law Gaussian correlation.
double tick_correlation(const ModelParams& p, long long m);

// K_m with the exact fractional-noise correlation rho_m in place of the
// power law. This is what a simulation actually produces.
double tick_correlation_exact(const ModelParams& p, long long m);

// F(theta, rho) = E|X|^theta |X'|^theta for unit normals with correlation rho.
double f_theta_rho(double theta, double rho);
// F(theta, rho) - F(theta, 0), evaluated without the subtraction.
double f_tilde(double theta, double rho);
double f_theta_zero(double theta);
double f_theta_one(double theta);
// Closed form of F(1, rho).
double f_one_rho(double rho);

double g_theta(double theta);
// G(theta, rho) = g_theta rho^2.
double quadratic_approx(double theta, double rho);

enum class CorrMode { Exact, Approx };

double abs_return_corr(const ModelParams& p, double theta, long long m, CorrMode mode);

// chi of the approximate power law A_m = chi m^-sigma.
double abs_return_chi(const ModelParams& p, double theta);

// Lambda(theta) = A_m(theta) / max over the grid.
CorrelationCurve lambda_shape(const ModelParams& p, std::span<const double> theta_grid, long long m,
                              CorrMode mode = CorrMode::Approx);

}  // namespace msm
