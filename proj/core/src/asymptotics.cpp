#include "mlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mlab/errors.hpp"
#include "mlab/random.hpp"
#include "numerics.hpp"

namespace mlab::asymptotics {

using detail::kInf;

IntegralSpec::IntegralSpec(std::vector<double> alpha, std::vector<double> r, double a) : a_(a) {
  if (alpha.size() != r.size()) throw precondition_error("alpha and r differ in length");
  if (alpha.size() < 2) throw precondition_error("integral spec needs k >= 2");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 1) || !std::isfinite(alpha[i])) throw precondition_error("alpha_i must exceed 1");
    if (!(r[i] > 0) || !std::isfinite(r[i])) throw precondition_error("r_i must be positive");
  }
  if (!(a > 0) || !std::isfinite(a)) throw precondition_error("threshold must be positive");
  std::vector<std::size_t> order(alpha.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return (alpha[x] - 1) / r[x] < (alpha[y] - 1) / r[y];
  });
  for (std::size_t i : order) {
    alpha_.push_back(alpha[i]);
    r_.push_back(r[i]);
  }
}

IntegralSpec IntegralSpec::with_threshold(double a) const { return IntegralSpec(alpha_, r_, a); }

int IntegralSpec::d_prime() const {
  int d = 0;
  for (std::size_t i = 1; i < k(); ++i)
    if (std::abs(ratio(i) - ratio(0)) <= 1e-12) ++d;
  return d;
}

double IntegralSpec::full_mass() const {
  double m = 1;
  for (double al : alpha_) m /= al - 1;
  return m;
}

namespace {

// After substituting u_i = e^{x_i} and factoring out a^{-rho_1}, the remaining
// integral over the last k-1 variables is J(1, log a), where
//   J(i, L) = int_0^{L/r_i} e^{-r_i x (rho_i - rho_1)} J(i+1, L - r_i x) dx
//             + C_{i+1} e^{(rho_1 - rho_i) L} / (alpha_i - 1),
//   J(k, L) = 1/(alpha_1 - 1),  C_i = J(i, 0) = prod_{j>=i} 1/(alpha_j - 1) / (alpha_1 - 1).
class Reduction {
 public:
  Reduction(const IntegralSpec& spec, double rel_tol) : spec_(spec), tol_(rel_tol) {
    const std::size_t k = spec.k();
    c_.assign(k + 1, 0.0);
    c_[k] = 1.0 / (spec.alpha()[0] - 1);
    for (std::size_t i = k; i-- > 1;) c_[i] = c_[i + 1] / (spec.alpha()[i] - 1);
  }

  double operator()(std::size_t i, double L) const {
    const std::size_t k = spec_.k();
    if (i == k) return c_[k];
    const double ri = spec_.r()[i];
    const double gap = spec_.ratio(i) - spec_.ratio(0);
    const double tail = c_[i + 1] * std::exp(-gap * L) / (spec_.alpha()[i] - 1);
    double inner;
    if (i + 1 == k) {
      // J(k, .) is constant: closed form.
      double g = gap * L;
      inner = c_[k] * (g > 1e-300 ? -std::expm1(-g) / (ri * gap) : L / ri);
    } else {
      auto f = [&](double x) { return std::exp(-ri * x * gap) * (*this)(i + 1, L - ri * x); };
      double err = 0;
      double tol = tol_ * std::pow(0.1, static_cast<double>(k - i - 1));
      inner = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, L / ri, 15,
                                                                            std::max(tol, 1e-14), &err);
      if (!std::isfinite(inner) || err > 1e-4 * std::abs(inner) + 1e-300)
        throw convergence_error("integral reduction did not converge");
    }
    return inner + tail;
  }

 private:
  const IntegralSpec& spec_;
  double tol_;
  std::vector<double> c_;
};

void check_tol(double rel_tol) {
  if (!(rel_tol >= 1e-10 && rel_tol <= 1e-2)) throw precondition_error("relTol must lie in [1e-10, 1e-2]");
}

}  // namespace

double eval_log_integral(const IntegralSpec& spec, double rel_tol) {
  check_tol(rel_tol);
  if (spec.a() <= 1) return std::log(spec.full_mass());
  const double L = std::log(spec.a());
  Reduction red(spec, rel_tol);
  return -spec.ratio(0) * L + std::log(red(1, L));
}

double eval_integral(const IntegralSpec& spec, double rel_tol) {
  return std::exp(eval_log_integral(spec, rel_tol));
}

McEstimate mc_oracle(const IntegralSpec& spec, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 10000) throw precondition_error("mc_oracle needs at least 1e4 samples");
  auto gen = random::stream(seed, 0x6d63);
  const double L = std::log(spec.a());
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    double s = 0;
    for (std::size_t i = 0; i < spec.k(); ++i) {
      double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      // log of a Pareto(alpha_i - 1) draw on [1, inf)
      s += spec.r()[i] * (-std::log1p(-u) / (spec.alpha()[i] - 1));
    }
    if (s > L) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  const double m = spec.full_mass();
  return {p * m, m * std::sqrt(p * (1 - p) / static_cast<double>(samples))};
}

namespace {

FitResult regress(const std::vector<double>& lx, const std::vector<double>& ll,
                  const std::vector<double>& ly) {
  if (ly.size() < 3) throw precondition_error("fit needs at least three points");
  std::vector<double> one(ly.size(), 1.0);
  FitResult out;
  auto b = detail::least_squares({lx, ll, one}, ly, &out.residual);
  out.exponent = b[0];
  out.log_power = b[1];
  return out;
}

}  // namespace

FitResult fit_power_log(const std::vector<double>& x, const std::vector<double>& log_y) {
  if (x.size() != log_y.size()) throw std::invalid_argument("fit input lengths differ");
  std::vector<double> lx, ll;
  for (double v : x) {
    lx.push_back(std::log(v));
    ll.push_back(detail::loglog_e_plus_exp(std::log(v)));
  }
  FitResult f = regress(lx, ll, log_y);
  f.c_low = f.c_high = std::exp(log_y.empty() ? 0.0 : log_y.front());
  return f;
}

FitResult fit_asymptotics(const IntegralSpec& spec, const std::vector<double>& a_grid, double rel_tol) {
  if (a_grid.empty()) throw precondition_error("empty aGrid");
  auto [lo, hi] = std::minmax_element(a_grid.begin(), a_grid.end());
  if (*lo < 2) throw precondition_error("aGrid must satisfy a >= 2");
  if (std::log10(*hi / *lo) < 6 - 1e-9) throw precondition_error("aGrid must span six decades");
  std::vector<double> ly;
  ly.reserve(a_grid.size());
  for (double a : a_grid) ly.push_back(eval_log_integral(spec.with_threshold(a), rel_tol));
  FitResult f = fit_power_log(a_grid, ly);
  double emin = kInf, emax = -kInf;
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    double la = std::log(a_grid[i]);
    double e = ly[i] - spec.exponent() * la - spec.d_prime() * detail::loglog_e_plus_exp(la);
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  f.c_low = std::exp(emin);
  f.c_high = std::exp(emax);
  return f;
}

// ---------------------------------------------------------------------------
// Superlevel sets

namespace {

struct Box {
  std::vector<double> lo, hi;
};

double min_abs(double lo, double hi) { return (lo < 0 && hi > 0) ? 0.0 : std::min(std::abs(lo), std::abs(hi)); }
double max_abs(double lo, double hi) { return std::max(std::abs(lo), std::abs(hi)); }

// Measure of {y in box : sum_{i>=d} s_i log(1+|y_i|) < T}.
class LevelMeasure {
 public:
  LevelMeasure(const Box& box, const std::vector<double>& s) : box_(box), s_(s) {}

  double operator()(std::size_t d, double T) const {
    if (!(T > 0)) return 0.0;
    const std::size_t n = s_.size();
    double mn = 0, mx = 0, vol = 1;
    for (std::size_t i = d; i < n; ++i) {
      mn += s_[i] * std::log1p(min_abs(box_.lo[i], box_.hi[i]));
      mx += s_[i] * std::log1p(max_abs(box_.lo[i], box_.hi[i]));
      vol *= box_.hi[i] - box_.lo[i];
    }
    if (mn >= T) return 0.0;
    if (mx < T) return vol;
    const double lo = box_.lo[d], hi = box_.hi[d];
    if (d + 1 == n) {
      double R = std::expm1(T / s_[d]);
      return std::max(0.0, std::min(hi, R) - std::max(lo, -R));
    }
    std::vector<double> crit = critical(d + 1);
    double total = 0;
    auto side = [&](double u0, double u1) {
      double z0 = std::log1p(u0);
      double z1 = std::min(std::log1p(u1), T / s_[d]);
      if (!(z1 > z0)) return;
      std::vector<double> cuts{z0, z1};
      for (double c : crit) {
        double z = (T - c) / s_[d];
        if (z > z0 && z < z1) cuts.push_back(z);
      }
      std::sort(cuts.begin(), cuts.end());
      auto f = [&](double z) { return std::exp(z) * (*this)(d + 1, T - s_[d] * z); };
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (!(cuts[k + 1] > cuts[k])) continue;
        total += detail::integrate(f, cuts[k], cuts[k + 1], 1e-11, 12);
      }
    };
    if (lo < 0) side(std::max(0.0, -hi), -lo);
    if (hi > 0) side(std::max(0.0, lo), hi);
    return total;
  }

 private:
  const Box& box_;
  const std::vector<double>& s_;

  // Values of sum_{i>=d} s_i log(1+c_i) over corner magnitudes, where the
  // lower-dimensional measure fails to be smooth in T.
  std::vector<double> critical(std::size_t d) const {
    std::vector<double> acc{0.0};
    for (std::size_t i = d; i < s_.size(); ++i) {
      std::vector<double> mags{std::abs(box_.lo[i]), std::abs(box_.hi[i])};
      if (box_.lo[i] < 0 && box_.hi[i] > 0) mags.push_back(0.0);
      std::vector<double> next;
      for (double a : acc)
        for (double m : mags) next.push_back(a + s_[i] * std::log1p(m));
      acc.swap(next);
    }
    return acc;
  }
};

double box_level_measure(const Box& b, const std::vector<double>& s, double T) {
  return LevelMeasure(b, s)(0, T);
}

}  // namespace

double superlevel_measure(const SampledFunction& g, const std::vector<double>& s, double a) {
  const std::size_t n = g.dim();
  if (s.size() != n) throw precondition_error("s must have one entry per dimension");
  for (double v : s)
    if (!(v > 0)) throw precondition_error("s_i must be positive");
  if (!(a > 0)) throw precondition_error("level must be positive");
  double total = 0;
  Box box{std::vector<double>(n), std::vector<double>(n)};
  Box inner{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    double G = std::abs(g[k]);
    if (!(G > a)) continue;
    const double T = std::log(G / a);
    auto x = g.coords(k);
    bool inside_cube = true, meets_cube = true;
    for (std::size_t i = 0; i < n; ++i) {
      double h = 0.5 * g.axis(i).spacing();
      box.lo[i] = x[i] - h;
      box.hi[i] = x[i] + h;
      inside_cube = inside_cube && box.lo[i] >= -1 && box.hi[i] <= 1;
      inner.lo[i] = std::max(box.lo[i], -1.0);
      inner.hi[i] = std::min(box.hi[i], 1.0);
      meets_cube = meets_cube && inner.hi[i] > inner.lo[i];
    }
    if (inside_cube) continue;
    double m = box_level_measure(box, s, T);
    if (meets_cube) m -= box_level_measure(inner, s, T);
    total += std::max(m, 0.0);
  }
  return total;
}

namespace {

void check_streak(const std::vector<double>& s, int d) {
  if (s.empty()) throw precondition_error("empty s");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] < s[i - 1]) throw precondition_error("s must be sorted ascending");
  if (!(s[0] > 0 && s[0] < 1)) throw precondition_error("s_1 must lie in (0,1)");
  int ties = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i] - s[0]) <= 1e-12) ++ties;
  if (ties != d) throw precondition_error("d must equal the tie count with s_1");
}

std::size_t origin_index(const SampledFunction& g) {
  return nearest_index(g, std::vector<double>(g.dim(), 0.0));
}

}  // namespace

FitResult superlevel_measure_check(const SampledFunction& g, const std::vector<double>& s, int d,
                                   const std::vector<double>& a_grid, double q) {
  check_streak(s, d);
  if (s.size() != g.dim()) throw precondition_error("s must have one entry per dimension");
  double m0 = strong_maximal_at(g, q, origin_index(g));
  if (std::abs(m0 - 1) > 1e-9) throw precondition_error("normalization violated: maximal function at 0 is not 1");
  std::vector<double> lx, ll, ly;
  double emin = kInf, emax = -kInf;
  for (double a : a_grid) {
    if (!(a > 0)) throw precondition_error("levels must be positive");
    double mu = superlevel_measure(g, s, a);
    if (!(mu > 0)) continue;
    double l = std::log(a);
    double lg = detail::loglog_e_plus_exp(-l);
    lx.push_back(l);
    ll.push_back(lg);
    ly.push_back(std::log(mu));
    double e = std::log(mu) - (-l / s[0]) - d * lg;
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  FitResult f = regress(lx, ll, ly);
  f.c_low = std::exp(emin);
  f.c_high = std::exp(emax);
  return f;
}

rearrange::RatioReport weighted_rearrangement_check(const SampledFunction& g, const std::vector<double>& s,
                                                    int d, const std::vector<int>& j, std::size_t x_index,
                                                    double q) {
  check_streak(s, d);
  const std::size_t n = g.dim();
  if (s.size() != n || j.size() != n) throw precondition_error("s and j need one entry per dimension");
  if (x_index >= g.size()) throw precondition_error("point index out of range");
  for (int v : j)
    if (std::abs(v) > 40) throw precondition_error("dilation exponent out of range");
  auto x = g.coords(x_index);
  std::vector<double> mags(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto y = g.coords(k);
    double w = 0;
    for (std::size_t i = 0; i < n; ++i) w += s[i] * std::log1p(std::ldexp(std::abs(y[i] - x[i]), j[i]));
    mags[k] = std::abs(g[k]) * std::exp(-w);
  }
  int jsum = std::accumulate(j.begin(), j.end(), 0);
  auto prof = rearrange::RearrangementProfile::from_grid(mags, std::ldexp(g.cell_measure(), jsum));
  rearrange::RatioReport rep;
  rep.lhs = rearrange::sup_product(prof, weights::WeightFunction::omega(s[0], -s[0] * d));
  rep.rhs = strong_maximal_at(g, q, x_index);
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  rep.pass = std::isfinite(rep.ratio);
  return rep;
}

CubeSupportReport cube_support_check(const SampledFunction& h, const std::vector<double>& s, int d, double r,
                                     double q) {
  check_streak(s, d);
  if (s.size() != h.dim()) throw precondition_error("s must have one entry per dimension");
  if (!(1 / q < 1 / r && 1 / r < s[0])) throw precondition_error("need 1/q < 1/r < s_1");
  const std::size_t n = h.dim();
  const std::size_t origin = origin_index(h);
  auto oidx = h.unflatten(origin);
  std::vector<long> reach(n, 0);
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k] == cplx{}) continue;
    auto x = h.coords(k);
    auto idx = h.unflatten(k);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(x[i]) > 1 + 1e-12) throw precondition_error("h is not supported in the unit cube");
      reach[i] = std::max(reach[i], std::abs(static_cast<long>(idx[i]) - static_cast<long>(oidx[i])));
    }
  }
  CubeSupportReport rep;
  auto w = weights::WeightFunction::omega(s[0], -s[0] * d);
  auto prof = rearrange::rearrangement(h);
  if (prof.empty()) {
    rep.pass = true;
    return rep;
  }
  rep.marcinkiewicz = rearrange::marcinkiewicz_norm(prof, w);
  rep.weak = rearrange::weak_norm(prof, r);
  rep.maximal = strong_maximal_at(h, q, origin);
  rep.c12 = rep.marcinkiewicz / rep.weak;
  rep.c23 = rep.weak / rep.maximal;

  const double S = prof.total_measure();
  double best = -kInf;
  auto lat = detail::log_lattice(std::log(S) - 12 * detail::kLn10, std::log(S), 64);
  lat.push_back(std::log(S));
  for (double lt : lat) best = std::max(best, w.log_at(lt) - lt / r);
  rep.bound12 = std::exp(best) / (1 - 1 / r);

  double rect = 1;
  for (std::size_t i = 0; i < n; ++i) {
    long hw = 0;
    while (hw < reach[i]) hw = hw == 0 ? 1 : 2 * hw;
    rect *= static_cast<double>(2 * hw + 1) * h.axis(i).spacing();
  }
  rep.bound23 = std::pow(S, 1 / r - 1 / q) * std::pow(rect, 1 / q);
  rep.pass = rep.c12 <= rep.bound12 * (1 + 1e-9) && rep.c23 <= rep.bound23 * (1 + 1e-9);
  return rep;
}

}  // namespace mlab::asymptotics
