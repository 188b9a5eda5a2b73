#include "mlab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "mlab/errors.hpp"
#include "mlab/fft.hpp"
#include "numerics.hpp"

namespace mlab::rearrange {

using detail::kInf;
using detail::kLn10;

namespace {

double wv(const WeightFunction& w, double t) { return std::exp(w.log_at(std::log(t))); }

// int_a^b w(t)/t dt; a may be 0.
double int_w_over_t(const WeightFunction& w, double a, double b, double tol = 1e-11) {
  if (!(b > a)) return 0.0;
  double lb = std::log(b);
  if (a <= 0) {
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate([&](double y) { return std::exp(w.log_at(lb - y)); }, tol);
  }
  return detail::integrate([&](double x) { return std::exp(w.log_at(x)); }, std::log(a), lb, tol);
}

}  // namespace

void RearrangementProfile::finish() {
  partial_.resize(values_.size());
  double acc = 0, prev = 0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    acc += values_[k] * (breaks_[k] - prev);
    prev = breaks_[k];
    partial_[k] = acc;
  }
}

RearrangementProfile RearrangementProfile::from_grid(const std::vector<double>& magnitudes,
                                                     double cell_measure) {
  std::vector<double> v;
  v.reserve(magnitudes.size());
  for (double m : magnitudes)
    if (m > 0) v.push_back(m);
  std::sort(v.begin(), v.end(), std::greater<>());
  RearrangementProfile p;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ++count;
    if (i + 1 == v.size() || v[i + 1] != v[i]) {
      p.values_.push_back(v[i]);
      p.breaks_.push_back(cell_measure * static_cast<double>(count));
    }
  }
  p.finish();
  return p;
}

RearrangementProfile RearrangementProfile::from_pieces(std::vector<std::pair<double, double>> pieces) {
  std::erase_if(pieces, [](const auto& pc) { return !(pc.first > 0 && pc.second > 0); });
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  RearrangementProfile p;
  double acc = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    acc += pieces[i].second;
    if (i + 1 == pieces.size() || pieces[i + 1].first != pieces[i].first) {
      p.values_.push_back(pieces[i].first);
      p.breaks_.push_back(acc);
    }
  }
  p.finish();
  return p;
}

double RearrangementProfile::at(double t) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  if (it == breaks_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double RearrangementProfile::measure_above(double tau) const {
  auto it = std::partition_point(values_.begin(), values_.end(), [&](double v) { return v > tau; });
  auto k = static_cast<std::size_t>(it - values_.begin());
  return k == 0 ? 0.0 : breaks_[k - 1];
}

double RearrangementProfile::integral_to(double t) const {
  if (values_.empty() || t <= 0) return 0.0;
  if (t >= breaks_.back()) return partial_.back();
  auto k = static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
  double base = k == 0 ? 0.0 : partial_[k - 1];
  double t0 = k == 0 ? 0.0 : breaks_[k - 1];
  return base + values_[k] * (t - t0);
}

double RearrangementProfile::total_integral() const { return partial_.empty() ? 0.0 : partial_.back(); }

double distribution_function(const SampledFunction& f, double tau) {
  std::uint64_t n = 0;
  for (const cplx& v : f.values()) n += std::abs(v) > tau;
  return f.cell_measure() * static_cast<double>(n);
}

RearrangementProfile rearrangement(const SampledFunction& f) {
  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mags[i] = std::abs(f[i]);
  return RearrangementProfile::from_grid(mags, f.cell_measure());
}

double double_star(const RearrangementProfile& p, double t) {
  if (!(t > 0)) throw std::domain_error("double_star needs t > 0");
  return p.integral_to(t) / t;
}

double lorentz_norm(const RearrangementProfile& p, const WeightFunction& w) {
  if (p.empty()) return 0.0;
  const auto& v = p.values();
  const auto& t = p.breaks();
  if (w.kind() == weights::Kind::Custom) {
    double w0 = std::exp(w.log_at(-690.0));
    if (w0 > 1e-9 * wv(w, t[0]))
      warn("lorentz_norm: weight does not vanish at 0+; the w(0+) f*(0+) term is included");
  }
  double s = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    double next = k + 1 < v.size() ? v[k + 1] : 0.0;
    s += wv(w, t[k]) * (v[k] - next);
  }
  return s;
}

double lorentz_norm(const SampledFunction& f, const WeightFunction& w) {
  return lorentz_norm(rearrangement(f), w);
}

double marcinkiewicz_norm(const RearrangementProfile& p, const WeightFunction& w) {
  if (p.empty()) return 0.0;
  auto value = [&](double lt) {
    double t = std::exp(lt);
    return std::exp(w.log_at(lt)) * p.integral_to(t) / t;
  };
  std::vector<double> cand;
  for (double t : p.breaks()) cand.push_back(std::log(t));
  double lo = std::log(p.breaks().front());
  double hi = std::log(p.total_measure()) + 8 * kLn10;
  for (double l : detail::log_lattice(lo, hi, 64)) cand.push_back(l);
  cand.push_back(hi);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::size_t best = 0;
  double best_v = -1;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    double v = value(cand[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  // Golden-section refinement on each side of the best candidate.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int side : {-1, 1}) {
    std::size_t j = best + side;
    if (side < 0 && best == 0) continue;
    if (j >= cand.size()) continue;
    double a = std::min(cand[best], cand[j]), b = std::max(cand[best], cand[j]);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = value(c), fd = value(d);
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
      if (fc > fd) {
        b = d, d = c, fd = fc;
        c = b - g * (b - a), fc = value(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + g * (b - a), fd = value(d);
      }
    }
    best_v = std::max({best_v, fc, fd});
  }
  return best_v;
}

double marcinkiewicz_norm(const SampledFunction& f, const WeightFunction& w) {
  return marcinkiewicz_norm(rearrangement(f), w);
}

double weak_norm(const RearrangementProfile& p, double r) {
  if (!(r > 0)) throw precondition_error("weak_norm needs r > 0");
  double m = 0;
  for (std::size_t k = 0; k < p.steps(); ++k)
    m = std::max(m, std::pow(p.breaks()[k], 1.0 / r) * p.values()[k]);
  return m;
}

double weak_norm(const SampledFunction& f, double r) { return weak_norm(rearrangement(f), r); }

double sup_product(const RearrangementProfile& p, const WeightFunction& w) {
  double m = 0;
  for (std::size_t k = 0; k < p.steps(); ++k) m = std::max(m, p.values()[k] * wv(w, p.breaks()[k]));
  return m;
}

RatioReport check_holder(const SampledFunction& f, const SampledFunction& g, const WeightFunction& w) {
  if (!same_grid(f, g)) throw precondition_error("check_holder needs functions on the same grid");
  RatioReport r;
  double s = 0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i]) * std::abs(g[i]);
  r.lhs = s * f.cell_measure();
  double lf = lorentz_norm(f, w);
  r.rhs = lf == 0 ? 0.0 : lf * marcinkiewicz_norm(g, weights::dual_weight(w));
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  r.bound = 1.0;
  r.pass = r.lhs <= r.rhs * (1 + 1e-9);
  return r;
}

double hardy_constant(const WeightFunction& w, double p) {
  double sum = 0;
  for (int k = 1; k <= 4000; ++k) {
    double term = std::exp(-k * p * std::log(2.0) + weights::log_dilation_function(w, k * std::log(2.0)));
    if (!std::isfinite(term)) throw std::domain_error("hardy constant: dilation function not finite");
    sum += term;
    if (k > 8 && term < 1e-15 * sum) return sum;
  }
  throw convergence_error("hardy constant series did not converge");
}

RatioReport check_hardy(const RearrangementProfile& prof, const WeightFunction& w, double p) {
  if (!(p > 0 && p <= 1)) throw precondition_error("check_hardy needs p in (0,1]");
  if (!(weights::indices(w).delta < p)) throw precondition_error("check_hardy needs delta_w < p");
  RatioReport r;
  r.bound = hardy_constant(w, p);
  if (prof.empty()) {
    r.ratio = 1.0;
    r.pass = true;
    return r;
  }
  const auto& v = prof.values();
  const auto& t = prof.breaks();
  double a = 0, b = 0;
  double prev = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    double iw = int_w_over_t(w, prev, t[k]);
    a += std::pow(v[k], p) * iw;
    if (k == 0) {
      b += std::pow(v[0], p) * iw;
    } else {
      double base = prof.integral_to(prev), vk = v[k], t0 = prev;
      b += detail::integrate(
          [&](double x) {
            double tt = std::exp(x);
            return std::pow((base + vk * (tt - t0)) / tt, p) * std::exp(w.log_at(x));
          },
          std::log(prev), std::log(t[k]), 1e-11);
    }
    prev = t[k];
  }
  double total = prof.total_integral();
  double ltm = std::log(prof.total_measure());
  b += detail::integrate(
      [&](double x) { return std::pow(total * std::exp(-x), p) * std::exp(w.log_at(x)); }, ltm,
      ltm + 6 * kLn10, 1e-11);
  r.lhs = b;
  r.rhs = a;
  r.ratio = b / a;
  r.pass = std::isfinite(r.ratio) && r.ratio <= r.bound * (1 + 1e-9);
  return r;
}

RatioReport check_hardy(const SampledFunction& f, const WeightFunction& w, double p) {
  return check_hardy(rearrangement(f), w, p);
}

namespace {

// int over the profile pieces of v_k * r^q * W(r)/r.
double sunrise_direct(const RearrangementProfile& p, double q, const WeightFunction& w) {
  double s = 0, prev = 0;
  for (std::size_t k = 0; k < p.steps(); ++k) {
    double vk = p.values()[k];
    if (prev == 0) {
      double lb = std::log(p.breaks()[0]);
      boost::math::quadrature::exp_sinh<double> es;
      s += vk * es.integrate([&](double y) { return std::exp(q * (lb - y) + w.log_at(lb - y)); }, 1e-11);
    } else {
      s += vk * detail::integrate([&](double x) { return std::exp(q * x + w.log_at(x)); },
                                  std::log(prev), std::log(p.breaks()[k]), 1e-11);
    }
    prev = p.breaks()[k];
  }
  return s;
}

double sunrise_sorted(const RearrangementProfile& p, double q, const WeightFunction& w, int sub) {
  std::vector<std::pair<double, double>> pieces;
  double prev = 0;
  auto cell_avg = [q](double v, double a, double b) {
    return v * (std::pow(b, q + 1) - std::pow(a, q + 1)) / ((q + 1) * (b - a));
  };
  for (std::size_t k = 0; k < p.steps(); ++k) {
    double vk = p.values()[k], tk = p.breaks()[k];
    double a = prev;
    if (prev == 0) {
      a = tk * 1e-12;
      pieces.emplace_back(cell_avg(vk, 0.0, a), a);
    }
    double la = std::log(a), lb = std::log(tk);
    double x0 = a;
    for (int j = 1; j <= sub; ++j) {
      double x1 = j == sub ? tk : std::exp(la + (lb - la) * j / sub);
      pieces.emplace_back(cell_avg(vk, x0, x1), x1 - x0);
      x0 = x1;
    }
    prev = tk;
  }
  auto h = RearrangementProfile::from_pieces(std::move(pieces));
  double s = 0;
  prev = 0;
  for (std::size_t k = 0; k < h.steps(); ++k) {
    s += h.values()[k] * int_w_over_t(w, prev, h.breaks()[k]);
    prev = h.breaks()[k];
  }
  return s;
}

}  // namespace

SunriseReport check_sunrise(const RearrangementProfile& p, double alpha, double beta, double gamma,
                            int subcells) {
  if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1))
    throw precondition_error("check_sunrise needs 0 < alpha, beta < 1");
  if (!(gamma >= 0)) throw precondition_error("check_sunrise needs gamma >= 0");
  SunriseReport r;
  if (p.empty()) {
    r.ratio = r.ratio_refined = 1.0;
    r.finite = r.stable = r.pass = true;
    return r;
  }
  auto wa = WeightFunction::phi(alpha, gamma);
  auto wb = WeightFunction::phi(beta, gamma);
  r.rhs = sunrise_direct(p, 0.0, wb);
  if (!std::isfinite(r.rhs)) {
    warn("check_sunrise: right-hand side diverges; no claim");
    return r;
  }
  if (beta <= alpha) {
    r.lhs = sunrise_direct(p, beta - alpha, wa);
    r.ratio = r.ratio_refined = r.lhs / r.rhs;
  } else {
    r.lhs = sunrise_sorted(p, beta - alpha, wa, subcells);
    r.ratio = r.lhs / r.rhs;
    r.ratio_refined = sunrise_sorted(p, beta - alpha, wa, 2 * subcells) / r.rhs;
  }
  r.finite = std::isfinite(r.ratio) && std::isfinite(r.ratio_refined);
  r.stable = r.finite && std::abs(r.ratio / r.ratio_refined - 1.0) <= 0.1;
  r.pass = r.finite && r.stable;
  return r;
}

SunriseReport check_sunrise(const SampledFunction& f, double alpha, double beta, double gamma,
                            int subcells) {
  return check_sunrise(rearrangement(f), alpha, beta, gamma, subcells);
}

SampledFunction fourier_magnitude(const SampledFunction& f) {
  auto spec = fft::continuous_transform(f);
  std::vector<Axis> axes;
  for (const Axis& a : f.axes()) axes.push_back(frequency_axis(a));
  SampledFunction out = SampledFunction::zeros(axes);
  auto shape = f.shape();
  for (std::size_t i = 0; i < out.size(); ++i) {
    // natural order index j maps to DFT index (j + N/2) mod N on each axis
    auto idx = out.unflatten(i);
    std::size_t flat = 0;
    for (std::size_t d = 0; d < shape.size(); ++d)
      flat = flat * shape[d] + (idx[d] + shape[d] / 2) % shape[d];
    out.mutable_values()[i] = std::abs(spec[flat]);
  }
  return out;
}

RatioReport hausdorff_young_lorentz(const SampledFunction& f, const WeightFunction& w) {
  if (f.dim() != 1) throw precondition_error("hausdorff_young_lorentz needs a 1-d function");
  auto ix = weights::indices(w);
  if (!(ix.gamma > 0.5 && ix.delta < 1.0))
    throw precondition_error("hausdorff_young_lorentz needs 1/2 < gamma_w <= delta_w < 1");
  RatioReport r;
  r.lhs = lorentz_norm(fourier_magnitude(f), weights::reflect_weight(w));
  r.rhs = lorentz_norm(f, w);
  r.ratio = r.rhs > 0 ? r.lhs / r.rhs : 0.0;
  r.pass = std::isfinite(r.ratio);
  return r;
}

}  // namespace mlab::rearrange
