#pragma once
// Bid-ask bounce signs M_k and heavy-tailed amplitude divisors H_k.

#include <cstdint>
#include <vector>

namespace msm {

// q is the probability that two consecutive trades sit on the same side
// of the book (no sign flip).
struct BounceParams {
  double q = 0.1;

  void validate() const;
  // ln(1/|2q-1|); infinite at q = 1/2.
  double q_tilde() const;
};

struct AmplitudeParams {
  double mu = 4.0;
  double b = 1.0;

  void validate() const;
};

// C_m = (2q-1)^m, with C_0 = 1 for every q.
double bounce_corr(double q, long long m);

// The same quantity written as exp(-q_tilde m), times (-1)^m below q = 1/2.
double bounce_corr_two_branch(double q, long long m);

// M_k = s (-1)^(xi_k), xi_k the running count of flips; each step flips
// with probability 1 - q and the initial sign s is a fair coin.
std::vector<int> sample_bounce(double q, std::size_t n, std::uint64_t seed);

// H = sqrt(2G)/b with G ~ Gamma(mu/2, 1).
std::vector<double> sample_amplitude(const AmplitudeParams& p, std::size_t n, std::uint64_t seed);

// Density and distribution function of H.
double amplitude_pdf(double eta, const AmplitudeParams& p);
double amplitude_cdf(double eta, const AmplitudeParams& p);

// E[H^-theta] = b^theta 2^(-theta/2) Gamma((mu-theta)/2) / Gamma(mu/2).
double inverse_moment(double theta, const AmplitudeParams& p);

// Density of Y/H for standard normal Y: a scaled Student law with mu
// degrees of freedom.
double student_pdf(double r, const AmplitudeParams& p);

}  // namespace msm
