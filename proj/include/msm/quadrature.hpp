#pragma once
// Adaptive Gauss-Kronrod (7/15) integration over finite intervals.
//
// Works for any value type with +, -, scalar * and an abs() overload
// (double and std::complex<double>). The subdivision order is fully
// deterministic: the interval with the largest error estimate is split
// first, ties broken by position.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "msm/error.hpp"

namespace msm::quad {

struct Tolerance {
  double abs_tol = 1e-13;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at kXk[1], kXk[3], kXk[5], kXk[7].
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
};

template <class T, class F>
Segment<T> kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = kWk[7] * fc;
  T gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXk[static_cast<std::size_t>(i)];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron = kron + kWk[static_cast<std::size_t>(i)] * (f1 + f2);
    if (i % 2 == 1) gauss = gauss + kWg[static_cast<std::size_t>(i / 2)] * (f1 + f2);
  }
  return {a, b, h * kron, std::abs(h) * magnitude(kron - gauss)};
}

}  // namespace detail

// Integrates f over [a, b], subdividing at the supplied interior
// breakpoints first. Returns the best estimate whether or not the
// tolerance was met; check `converged`.
template <class T, class F>
Result<T> integrate(F&& f, double a, double b, const Tolerance& tol,
                    std::span<const double> breakpoints = {}) {
  std::vector<detail::Segment<T>> segs;
  Result<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<double> edges{a};
  for (double p : breakpoints)
    if (p > std::min(a, b) && p < std::max(a, b)) edges.push_back(p);
  edges.push_back(b);
  if (b > a) std::sort(edges.begin() + 1, edges.end() - 1);
  else std::sort(edges.begin() + 1, edges.end() - 1, std::greater<>());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] == edges[i + 1]) continue;
    segs.push_back(detail::kronrod15<T>(f, edges[i], edges[i + 1]));
    out.evaluations += 15;
  }

  auto totals = [&](T& v, double& e) {
    v = T{};
    e = 0.0;
    for (const auto& s : segs) {
      v = v + s.value;
      e += s.error;
    }
  };
  T value;
  double err;
  totals(value, err);
  while (err > std::max(tol.abs_tol, tol.rel_tol * detail::magnitude(value))) {
    if (static_cast<int>(segs.size()) >= tol.max_intervals) {
      out.value = value;
      out.error = err;
      out.converged = false;
      return out;
    }
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const auto& l, const auto& r) { return l.error < r.error; });
    const double ma = worst->a, mb = worst->b, mid = 0.5 * (ma + mb);
    if (mid == ma || mid == mb) {
      // Interval cannot be split further in double precision.
      out.value = value;
      out.error = err;
      out.converged = false;
      return out;
    }
    *worst = detail::kronrod15<T>(f, ma, mid);
    segs.push_back(detail::kronrod15<T>(f, mid, mb));
    out.evaluations += 30;
    totals(value, err);
  }
  out.value = value;
  out.error = err;
  out.converged = true;
  return out;
}

// Same as integrate() but throws QuadratureError when the tolerance is
// not reached.
template <class T, class F>
Result<T> integrate_or_throw(F&& f, double a, double b, const Tolerance& tol,
                             const std::string& what, std::span<const double> breakpoints = {}) {
  auto r = integrate<T>(std::forward<F>(f), a, b, tol, breakpoints);
  if (!r.converged) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", r.error);
    throw QuadratureError(what + ": adaptive quadrature did not converge (error estimate " + buf + ")");
  }
  return r;
}

}  // namespace msm::quad
