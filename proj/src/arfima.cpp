#include "msm/arfima.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include "msm/error.hpp"
#include "msm/random.hpp"
#include "msm/specfun.hpp"

namespace msm {
namespace {

void check_d(double d, const char* where) {
  if (!(d > 0.0 && d < 0.5))
    detail::domain_fail(where, "fractional order d must lie in (0, 1/2), got " + std::to_string(d));
}

// FFTW planning is not thread safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place forward DFT of length buf.size().
void forward_dft(std::vector<std::complex<double>>& buf) {
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

std::vector<double> circulant_path(double d, std::size_t n, Rng& rng) {
  const std::size_t N = next_pow2(std::max<std::size_t>(n, 2));
  const std::size_t M = 2 * N;
  std::vector<std::complex<double>> row(M);
  double rho = 1.0;
  row[0] = 1.0;
  for (std::size_t m = 1; m <= N; ++m) {
    rho *= (static_cast<double>(m) - 1.0 + d) / (static_cast<double>(m) - d);
    row[m] = rho;
    if (m < N) row[M - m] = rho;
  }
  forward_dft(row);
  double lmax = 0.0;
  for (const auto& v : row) lmax = std::max(lmax, v.real());
  std::vector<std::complex<double>> w(M);
  for (std::size_t k = 0; k < M; ++k) {
    double lam = row[k].real();
    if (lam < 0.0) {
      if (lam < -1e-9 * lmax)
        throw DegenerateError("sample_path: circulant embedding has a negative eigenvalue");
      lam = 0.0;
    }
    const double scale = std::sqrt(lam / static_cast<double>(M));
    const double zr = standard_normal(rng);
    const double zi = standard_normal(rng);
    w[k] = {scale * zr, scale * zi};
  }
  forward_dft(w);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
  return out;
}

std::vector<double> truncated_ma_path(double d, int J, std::size_t n, Rng& rng) {
  const std::vector<double> a = ma_coefficients(d, J);
  double norm2 = 0.0;
  for (double v : a) norm2 += v * v;
  const double inv = 1.0 / std::sqrt(norm2);
  const std::size_t Ju = static_cast<std::size_t>(J);
  // u[i] is the innovation at time index i - J.
  std::vector<double> u(n + Ju);
  for (double& v : u) v = standard_normal(rng);
  std::vector<double> out(n, 0.0);
  constexpr std::size_t kBlock = 256;
  for (std::size_t k0 = 0; k0 < n; k0 += kBlock) {
    const std::size_t k1 = std::min(n, k0 + kBlock);
    for (std::size_t j = 0; j <= Ju; ++j) {
      const double aj = a[j];
      const double* src = u.data() + Ju - j;
      for (std::size_t k = k0; k < k1; ++k) out[k] += aj * src[k];
    }
  }
  for (double& v : out) v *= inv;
  return out;
}

}  // namespace

ArfimaParams ArfimaParams::from_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    detail::domain_fail("ArfimaParams", "alpha must lie in (0, 1), got " + std::to_string(alpha));
  ArfimaParams p;
  p.d = 0.5 * (1.0 - alpha);
  return p;
}

void ArfimaParams::validate() const {
  check_d(d, "ArfimaParams");
  if (J < 1) detail::domain_fail("ArfimaParams", "truncation J must be >= 1");
}

std::vector<double> ma_coefficients(double d, int J) {
  check_d(d, "ma_coefficients");
  if (J < 1) detail::domain_fail("ma_coefficients", "J must be >= 1");
  std::vector<double> a(static_cast<std::size_t>(J) + 1);
  a[0] = 1.0;
  for (int j = 1; j <= J; ++j) a[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j - 1)] * (j - 1 + d) / j;
  return a;
}

double ma_norm_squared(double d) {
  check_d(d, "ma_norm_squared");
  return std::exp(log_gamma(1.0 - 2.0 * d) - 2.0 * log_gamma(1.0 - d));
}

double ma_tail_mass(double d, int J) {
  const std::vector<double> a = ma_coefficients(d, J);
  double head = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) head += *it * *it;
  return std::max(0.0, ma_norm_squared(d) - head);
}

double correlation_exact(double d, long long m) {
  check_d(d, "correlation_exact");
  if (m < 0) m = -m;
  if (m == 0) return 1.0;
  if (m <= 10'000) {
    double rho = 1.0;
    for (long long k = 1; k <= m; ++k) rho *= (k - 1 + d) / (k - d);
    return rho;
  }
  const double md = static_cast<double>(m);
  return std::exp(log_gamma(1.0 - d) - log_gamma(d) + log_gamma(md + d) - log_gamma(md + 1.0 - d));
}

double powerlaw_prefactor(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    detail::domain_fail("correlation_powerlaw", "alpha must lie in (0, 1), got " + std::to_string(alpha));
  return std::exp(log_gamma(0.5 * (1.0 + alpha)) - log_gamma(0.5 * (1.0 - alpha)));
}

double correlation_powerlaw(double alpha, long long m) {
  const double f = powerlaw_prefactor(alpha);
  if (m < 0) m = -m;
  if (m == 0) return 1.0;
  return f * std::pow(static_cast<double>(m), -alpha);
}

GaussianPath sample_path(const ArfimaParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  if (n < 1) detail::domain_fail("sample_path", "n must be >= 1");
  Rng rng = make_rng(seed);
  GaussianPath p;
  p.seed = seed;
  p.params = params;
  if (params.method == PathMethod::TruncatedMA) {
    const double tail = ma_tail_mass(params.d, params.J);
    if (!(tail < kMaTailBound))
      throw DomainError("sample_path: MA truncation J=" + std::to_string(params.J) +
                        " leaves tail mass " + std::to_string(tail) + " >= " +
                        std::to_string(kMaTailBound) + " for d=" + std::to_string(params.d));
    p.values = truncated_ma_path(params.d, params.J, n, rng);
  } else {
    p.values = circulant_path(params.d, n, rng);
  }
  return p;
}

}  // namespace msm
