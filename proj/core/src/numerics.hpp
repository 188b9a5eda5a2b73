#pragma once

// Internal helpers shared by the core sources. Not installed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mlab::detail {

inline constexpr double kLn10 = 2.302585092994045684;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log(log(e + e^x)) for any real x.
inline double loglog_e_plus_exp(double x) { return std::log(logaddexp(1.0, x)); }

// Points 10^(k/per_decade) for integer k with lo <= 10^(k/per_decade) <= hi, as natural logs.
inline std::vector<double> log_lattice(double log_lo, double log_hi, int per_decade) {
  double step = kLn10 / per_decade;
  long k0 = static_cast<long>(std::ceil(log_lo / step - 1e-9));
  long k1 = static_cast<long>(std::floor(log_hi / step + 1e-9));
  std::vector<double> out;
  if (k1 >= k0) out.reserve(static_cast<std::size_t>(k1 - k0 + 1));
  for (long k = k0; k <= k1; ++k) out.push_back(static_cast<double>(k) * step);
  return out;
}

inline std::vector<double> logspace(double log10_lo, double log10_hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::pow(10.0, log10_lo + f * (log10_hi - log10_lo));
  }
  return out;
}

// Least-squares coefficients for y ~ X b, X given by columns.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y, double* rms = nullptr);

// One 15/31-point Gauss-Kronrod panel on [a, b]; err = |K - G| on the same scale.
template <class F>
double gk31_panel(F& f, double a, double b, double& err, double& l1) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  using G = boost::math::quadrature::gauss<double, 15>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double f0 = f(c);
  double k = f0 * wk[0], g = f0 * wg[0], l = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    double fp = f(c + h * x[i]), fm = f(c - h * x[i]);
    k += (fp + fm) * wk[i];
    l += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
  }
  err = std::abs(k - g) * h;
  l1 = l * h;
  return k * h;
}

template <class F>
double adaptive_gk(F& f, double a, double b, double abs_tol, unsigned depth, double& err) {
  double l1 = 0;
  double v = gk31_panel(f, a, b, err, l1);
  if (depth == 0 || err <= abs_tol || err <= 50 * std::numeric_limits<double>::epsilon() * l1) return v;
  double m = 0.5 * (a + b), e1 = 0, e2 = 0;
  v = adaptive_gk(f, a, m, 0.5 * abs_tol, depth - 1, e1) + adaptive_gk(f, m, b, 0.5 * abs_tol, depth - 1, e2);
  err = e1 + e2;
  return v;
}

// Adaptive Gauss-Kronrod on [a, b], bisecting until each panel's error is below its
// share of rel_tol times the first estimate.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10, unsigned depth = 20, double* err = nullptr) {
  double e = 0;
  if (!(b > a)) {
    if (err) *err = 0;
    return 0.0;
  }
  double l1 = 0;
  double first = gk31_panel(f, a, b, e, l1);
  double v = first;
  if (depth > 0 && e > rel_tol * std::abs(first) && e > 50 * std::numeric_limits<double>::epsilon() * l1) {
    double m = 0.5 * (a + b), e1 = 0, e2 = 0;
    double tol = rel_tol * std::max(std::abs(first), 1e-300);
    v = adaptive_gk(f, a, m, 0.5 * tol, depth - 1, e1) + adaptive_gk(f, m, b, 0.5 * tol, depth - 1, e2);
    e = e1 + e2;
  }
  if (err) *err = e;
  return v;
}

}  // namespace mlab::detail
