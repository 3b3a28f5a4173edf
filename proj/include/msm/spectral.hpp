#pragma once
// Calendar-time observables built from the spectrum B~(omega): the
// Delta-scale correlation K_Delta(tau), volatility density D(Delta),
// noise strengths S and S_Delta and the Epps curve S12_Delta.

#include <span>

#include "msm/curve.hpp"
#include "msm/intertrade.hpp"
#include "msm/tick_model.hpp"

namespace msm {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  // Periods of the window kernel integrated panel by panel before the
  // tail treatment takes over.
  int periods = 200;
  // Initial panels per kernel period.
  int panels_per_period = 2;
  // Laplace image policy used inside B~(omega).
  LaplaceMethod laplace = LaplaceMethod::Auto;
  // The u-integral of B~ stops where exp(u^(1/alpha)) exceeds this.
  double u_cutoff = 1e16;

  void validate() const;
};

// Gaussian delay of standard deviation lambda; spectrum exp(-w^2 lambda^2 / 2).
struct DelayKernel {
  double lambda = 0.0;

  double spectrum(double omega) const;
};

double b_spectrum(const ModelParams& p, const IntertradeDist& dist, double omega,
                  const QuadratureSpec& qs = {});

// B~(0), computed straight from its integral (no Laplace image involved).
double b_zero(const ModelParams& p);

// T~_Delta(omega) = 4 sin^2(omega Delta / 2) / omega^2.
double triangle_spectrum(double delta, double omega);

// T_Delta(tau) = max(Delta - |tau|, 0).
double triangle(double delta, double tau);

double k_delta(const ModelParams& p, const IntertradeDist& dist, double delta, double tau,
               const QuadratureSpec& qs = {});

// D(Delta) = K_Delta(0) / Delta.
double volatility_density(const ModelParams& p, const IntertradeDist& dist, double delta,
                          const QuadratureSpec& qs = {});

// D_true = eps_2 (1 + B~(0)), the large-Delta limit of D(Delta).
double d_true(const ModelParams& p);

// S = 1 / (1 + B~(0)).
double noise_strength(const ModelParams& p);

// S_Delta = D(Delta) / D_true.
double noise_strength_delta(const ModelParams& p, const IntertradeDist& dist, double delta,
                            const QuadratureSpec& qs = {});

// D_12(Delta) for a twin delayed by a Gaussian lag. The eps_2 factor is
// kept so that lambda = 0 gives D(Delta).
double cross_vol(const ModelParams& p, const IntertradeDist& dist, const DelayKernel& kernel,
                 double delta, const QuadratureSpec& qs = {});

// S12_Delta = D_12(Delta) / D_true on a grid of Delta values.
CorrelationCurve epps_curve(const ModelParams& p, const IntertradeDist& dist,
                            const DelayKernel& kernel, std::span<const double> delta_grid,
                            const QuadratureSpec& qs = {}, unsigned threads = 1);

// S_Delta on a grid.
CorrelationCurve noise_curve(const ModelParams& p, const IntertradeDist& dist,
                             std::span<const double> delta_grid, const QuadratureSpec& qs = {},
                             unsigned threads = 1);

}  // namespace msm
