#include "mlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "mlab/asymptotics.hpp"
#include "mlab/errors.hpp"
#include "mlab/fft.hpp"
#include "mlab/random.hpp"
#include "mlab/rearrange.hpp"
#include "numerics.hpp"

namespace mlab::multiplier {

using std::numbers::pi;

SampledFunction gamma_apply(const SampledFunction& f, const std::vector<cplx>& order, Direction dir) {
  if (order.size() != f.dim()) throw precondition_error("one order per axis");
  if (std::all_of(order.begin(), order.end(), [](cplx z) { return z == cplx{}; })) return f;
  const double sign = dir == Direction::Forward ? 1.0 : -1.0;
  return fft::apply_diagonal(f, [&](std::size_t, std::span<const double> xi) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < xi.size(); ++i) acc += 0.5 * sign * order[i] * std::log1p(4 * pi * pi * xi[i] * xi[i]);
    return std::exp(acc);
  });
}

double eta(double xi) {
  double a = std::abs(xi);
  if (a <= 1) return 1.0;
  if (a >= 2) return 0.0;
  double h1 = std::exp(-1.0 / (2 - a)), h2 = std::exp(-1.0 / (a - 1));
  return h1 / (h1 + h2);
}

LittlewoodPaleyFamily::LittlewoodPaleyFamily(int ppo) : ppo_(ppo) {
  if (ppo < 16) throw precondition_error("pointsPerOctave must be at least 16");
  for (int k = -ppo; k <= ppo; ++k) {
    double xi = std::exp2(static_cast<double>(k) / ppo);
    psi_.emplace_back(xi, psi(xi));
  }
  for (int k = -2 * ppo; k <= 2 * ppo; ++k) {
    double xi = std::exp2(static_cast<double>(k) / ppo);
    psi_b_.emplace_back(xi, psi_b(xi));
  }
}

double LittlewoodPaleyFamily::psi(double xi) { return eta(xi) - eta(2 * xi); }

double LittlewoodPaleyFamily::psi_b(double xi) { return psi(0.5 * xi) + psi(xi) + psi(2 * xi); }

double LittlewoodPaleyFamily::psi_tensor(std::span<const double> xi) {
  double v = 1;
  for (double x : xi) v *= psi(x);
  return v;
}

double LittlewoodPaleyFamily::psi_b_tensor(std::span<const double> xi) {
  double v = 1;
  for (double x : xi) v *= psi_b(x);
  return v;
}

DyadicRange LittlewoodPaleyFamily::resolvable(const Axis& a) {
  double nyq = a.half_width - std::abs(a.center);
  DyadicRange r;
  r.j_min = static_cast<int>(std::ceil(2 + std::log2(a.spacing()) - 1e-12));
  r.j_max = static_cast<int>(std::floor(std::log2(nyq) + 1e-12)) - 2;
  return r;
}

LittlewoodPaleyFamily build_lp_family(int ppo) { return LittlewoodPaleyFamily(ppo); }

// ---------------------------------------------------------------------------

namespace {

void check_s(const std::vector<double>& s, std::size_t n) {
  if (s.size() != n) throw precondition_error("one smoothness index per axis");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s[i] > 0 && s[i] < 1)) throw precondition_error("smoothness indices must lie in (0,1)");
    if (i > 0 && s[i] < s[i - 1]) throw precondition_error("smoothness indices must be sorted");
  }
}

}  // namespace

MultiplierSymbol MultiplierSymbol::analytic(std::vector<Axis> axes, Fn fn, std::vector<double> s, double p,
                                            std::string name) {
  if (axes.empty() || axes.size() > 3) throw precondition_error("symbols need 1 <= n <= 3");
  check_s(s, axes.size());
  if (!(p > 1) || !std::isfinite(p)) throw precondition_error("p must lie in (1, inf)");
  MultiplierSymbol m;
  m.axes_ = std::move(axes);
  m.fn_ = std::move(fn);
  m.shift_.assign(m.axes_.size(), 0);
  m.s_ = std::move(s);
  m.p_ = p;
  m.name_ = std::move(name);
  return m;
}

MultiplierSymbol MultiplierSymbol::sampled(SampledFunction samples, std::vector<double> s, double p,
                                           std::string name) {
  auto data = std::make_shared<const SampledFunction>(std::move(samples));
  auto fn = [data](std::span<const double> xi) -> cplx {
    const std::size_t n = data->dim();
    std::vector<std::size_t> base(n);
    std::vector<double> frac(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Axis& a = data->axis(i);
      double u = (xi[i] - (a.center - a.half_width)) / a.spacing();
      if (!(u >= 0 && u <= static_cast<double>(a.count - 1))) return {0.0, 0.0};
      auto k = std::min(static_cast<std::size_t>(u), a.count - 2);
      base[i] = k;
      frac[i] = u - static_cast<double>(k);
    }
    cplx acc{0.0, 0.0};
    std::vector<std::size_t> idx(n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double w = 1;
      for (std::size_t i = 0; i < n; ++i) {
        bool up = mask & (1u << i);
        idx[i] = base[i] + (up ? 1 : 0);
        w *= up ? frac[i] : 1 - frac[i];
      }
      if (w != 0) acc += w * (*data)[data->flatten(idx)];
    }
    return acc;
  };
  auto axes = data->axes();
  return analytic(std::move(axes), std::move(fn), std::move(s), p, std::move(name));
}

int MultiplierSymbol::d() const {
  int d = 0;
  for (std::size_t i = 1; i < s_.size(); ++i)
    if (std::abs(s_[i] - s_[0]) <= 1e-12) ++d;
  return d;
}

cplx MultiplierSymbol::operator()(std::span<const double> xi) const {
  double buf[3];
  for (std::size_t i = 0; i < xi.size(); ++i) buf[i] = std::ldexp(xi[i], shift_[i]);
  return scale_ * fn_(std::span<const double>(buf, xi.size()));
}

MultiplierSymbol MultiplierSymbol::dilated(const std::vector<int>& a) const {
  if (a.size() != dim()) throw precondition_error("one dilation exponent per axis");
  MultiplierSymbol m = *this;
  for (std::size_t i = 0; i < dim(); ++i) {
    m.shift_[i] += a[i];
    m.axes_[i].center = std::ldexp(m.axes_[i].center, -a[i]);
    m.axes_[i].half_width = std::ldexp(m.axes_[i].half_width, -a[i]);
  }
  return m;
}

MultiplierSymbol MultiplierSymbol::scaled(cplx c) const {
  MultiplierSymbol m = *this;
  m.scale_ *= c;
  return m;
}

std::vector<DyadicRange> MultiplierSymbol::resolvable() const {
  std::vector<DyadicRange> out;
  for (const Axis& a : axes_) {
    double nyq = a.half_width - std::abs(a.center);
    DyadicRange r;
    r.j_min = static_cast<int>(std::ceil(std::log2(a.spacing()) - 1e-12)) + 1;
    r.j_max = static_cast<int>(std::floor(std::log2(nyq) + 1e-12)) - 1;
    out.push_back(r);
  }
  return out;
}

std::vector<Axis> symbol_axes_for(const std::vector<Axis>& spatial) {
  std::vector<Axis> out;
  for (const Axis& a : spatial) {
    Axis f = frequency_axis(a);
    out.push_back(Axis{0.0, 2 * f.half_width, 4 * f.count});
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"constant",           "modulation",   "half-space",
                                              "random-band-limited", "bump-product", "marcinkiewicz"};
  return names;
}

MultiplierSymbol catalog_symbol(const std::string& name, std::vector<Axis> axes, std::vector<double> s, double p,
                                const SymbolParams& prm) {
  const std::size_t n = axes.size();
  const cplx c = prm.c;
  MultiplierSymbol::Fn fn;
  if (name == "constant") {
    fn = [c](std::span<const double>) { return c; };
  } else if (name == "modulation") {
    std::vector<double> a = prm.shift.empty() ? std::vector<double>(n, 0.0) : prm.shift;
    if (a.size() != n) throw precondition_error("modulation shift needs one entry per axis");
    fn = [c, a](std::span<const double> xi) {
      double ph = 0;
      for (std::size_t i = 0; i < xi.size(); ++i) ph += a[i] * xi[i];
      return c * std::polar(1.0, -2 * pi * ph);
    };
  } else if (name == "half-space") {
    fn = [c](std::span<const double> xi) { return xi[0] > 0 ? c : cplx{}; };
  } else if (name == "random-band-limited") {
    if (prm.modes < 0) throw precondition_error("modes must be nonnegative");
    // trigonometric polynomial in log2 |xi_i| with period 4 octaves
    const int m = prm.modes;
    const std::size_t per = static_cast<std::size_t>(2 * m + 1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= per;
    auto gen = random::stream(prm.seed, 0x73796d);
    std::normal_distribution<double> nd;
    std::vector<cplx> coef(total);
    double norm = 0;
    for (cplx& z : coef) {
      double re = nd(gen);
      double im = nd(gen);
      z = {re, im};
      norm += std::abs(z);
    }
    for (cplx& z : coef) z /= norm;
    fn = [c, coef, m, per, n](std::span<const double> xi) {
      std::vector<cplx> e(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (xi[i] == 0) return cplx{};
        e[i] = std::polar(1.0, 2 * pi * std::log2(std::abs(xi[i])) / 4);
      }
      cplx acc{};
      for (std::size_t k = 0; k < coef.size(); ++k) {
        cplx term = coef[k];
        std::size_t rest = k;
        for (std::size_t i = 0; i < n; ++i) {
          int mi = static_cast<int>(rest % per) - m;
          rest /= per;
          term *= std::pow(e[i], mi);
        }
        acc += term;
      }
      return c * acc;
    };
  } else if (name == "bump-product") {
    fn = [c](std::span<const double> xi) {
      double v = 1;
      for (double x : xi) {
        double u = (x - 1) / 0.25;
        if (std::abs(u) >= 1) return cplx{};
        v *= std::exp(1 - 1 / (1 - u * u));
      }
      return c * v;
    };
  } else if (name == "marcinkiewicz") {
    std::vector<double> tau = prm.tau.empty() ? std::vector<double>(n, 1.0) : prm.tau;
    if (tau.size() != n) throw precondition_error("tau needs one entry per axis");
    fn = [c, tau](std::span<const double> xi) {
      double ph = 0;
      for (std::size_t i = 0; i < xi.size(); ++i) {
        if (xi[i] == 0) return cplx{};
        ph += tau[i] * std::log(std::abs(xi[i]));
      }
      return c * std::polar(1.0, ph);
    };
  } else {
    throw precondition_error("unknown symbol family: " + name);
  }
  return MultiplierSymbol::analytic(std::move(axes), std::move(fn), std::move(s), p, name);
}

std::vector<Axis> default_piece_axes(std::size_t n) { return std::vector<Axis>(n, Axis{0.0, 8.0, 128}); }

SampledFunction localized_piece(const MultiplierSymbol& sigma, const std::vector<int>& j,
                                const std::vector<Axis>& piece_axes) {
  const std::size_t n = sigma.dim();
  if (j.size() != n || piece_axes.size() != n) throw precondition_error("dimension mismatch");
  auto ranges = sigma.resolvable();
  for (std::size_t i = 0; i < n; ++i)
    if (!ranges[i].contains(j[i])) throw precondition_error("jVec outside the resolvable range");
  return SampledFunction::sample(piece_axes, [&](std::span<const double> xi) -> cplx {
    double psi = LittlewoodPaleyFamily::psi_tensor(xi);
    if (psi == 0) return {0.0, 0.0};
    double y[3];
    for (std::size_t i = 0; i < n; ++i) y[i] = std::ldexp(xi[i], j[i]);
    return psi * sigma(std::span<const double>(y, n));
  });
}

weights::WeightFunction k_weight(const MultiplierSymbol& sigma) {
  return weights::WeightFunction::phi(sigma.s()[0], sigma.d());
}

weights::WeightFunction k_tilde_weight(const MultiplierSymbol& sigma) {
  return weights::WeightFunction::phi(sigma.s()[0], sigma.s()[0] * sigma.d());
}

weights::WeightFunction k_delta_weight(const MultiplierSymbol& sigma, double delta) {
  return weights::WeightFunction::phi(sigma.s()[0], (1 - sigma.s()[0]) * sigma.d() + delta);
}

KReport marcinkiewicz_constant(const MultiplierSymbol& sigma, const weights::WeightFunction& w,
                               const std::vector<Axis>& piece_axes) {
  const std::size_t n = sigma.dim();
  auto ranges = sigma.resolvable();
  for (const auto& r : ranges)
    if (r.empty()) throw precondition_error("empty resolvable range");
  std::vector<cplx> order;
  for (double v : sigma.s()) order.emplace_back(v, 0.0);
  KReport rep;
  rep.K = -1;
  std::vector<int> j(n);
  for (std::size_t i = 0; i < n; ++i) j[i] = ranges[i].j_min;
  for (;;) {
    auto piece = gamma_apply(localized_piece(sigma, j, piece_axes), order, Direction::Forward);
    double v = rearrange::lorentz_norm(piece, w);
    if (v > rep.K) {
      rep.K = v;
      rep.argmax = j;
    }
    ++rep.pieces;
    std::size_t d = 0;
    while (d < n && ++j[d] > ranges[d].j_max) {
      j[d] = ranges[d].j_min;
      ++d;
    }
    if (d == n) break;
  }
  return rep;
}

KReport marcinkiewicz_constant(const MultiplierSymbol& sigma, const weights::WeightFunction& w) {
  return marcinkiewicz_constant(sigma, w, default_piece_axes(sigma.dim()));
}

SampledFunction apply_multiplier(const MultiplierSymbol& sigma, const SampledFunction& f) {
  if (f.dim() != sigma.dim()) throw precondition_error("dimension mismatch");
  return fft::apply_diagonal(f, [&](std::size_t, std::span<const double> xi) { return sigma(xi); });
}

NormEstimate lp_operator_norm_estimate(const MultiplierSymbol& sigma, const std::vector<Axis>& axes, double p,
                                       std::size_t battery, std::uint64_t seed, int max_mode, int probes) {
  if (!(p > 1) || !std::isfinite(p)) throw precondition_error("p must lie in (1, inf)");
  if (battery < 100) throw precondition_error("battery must have at least 100 functions");
  if (axes.size() != sigma.dim()) throw precondition_error("dimension mismatch");
  NormEstimate est;
  for (std::size_t i = 0; i < battery; ++i) {
    auto f = random::band_limited(axes, max_mode, random::stream(seed, i)());
    double den = f.lp_norm(p);
    if (!(den > 0)) continue;
    est.estimate = std::max(est.estimate, apply_multiplier(sigma, f).lp_norm(p) / den);
  }
  // Single DFT modes are eigenfunctions; probe the largest |sigma| bins.
  auto freqs = fft::frequencies(axes);
  SampledFunction grid = SampledFunction::zeros(axes);
  const std::size_t total = grid.size();
  std::vector<std::pair<double, std::size_t>> mags(total);
  std::vector<double> xi(axes.size());
  for (std::size_t k = 0; k < total; ++k) {
    auto idx = grid.unflatten(k);
    for (std::size_t d = 0; d < axes.size(); ++d) xi[d] = freqs[d][idx[d]];
    mags[k] = {std::abs(sigma(xi)), k};
    est.max_symbol = std::max(est.max_symbol, mags[k].first);
  }
  auto top = std::min<std::size_t>(static_cast<std::size_t>(std::max(probes, 0)), total);
  std::partial_sort(mags.begin(), mags.begin() + static_cast<long>(top), mags.end(), std::greater<>());
  for (std::size_t t = 0; t < top; ++t) {
    auto mode = grid.unflatten(mags[t].second);
    auto f = SampledFunction::zeros(axes);
    for (std::size_t k = 0; k < total; ++k) {
      auto idx = f.unflatten(k);
      double ph = 0;
      for (std::size_t d = 0; d < axes.size(); ++d)
        ph += static_cast<double>((mode[d] * idx[d]) % axes[d].count) / static_cast<double>(axes[d].count);
      f.mutable_values()[k] = std::polar(1.0, 2 * pi * ph);
    }
    double r = apply_multiplier(sigma, f).lp_norm(p) / f.lp_norm(p);
    if (r > est.estimate) {
      est.estimate = r;
      est.from_probe = true;
    }
  }
  return est;
}

SampledFunction littlewood_paley_apply(const SampledFunction& f, int j, std::size_t axis, Variant v) {
  if (axis >= f.dim()) throw precondition_error("axis out of range");
  if (!LittlewoodPaleyFamily::resolvable(frequency_axis(f.axis(axis))).contains(j))
    throw precondition_error("dyadic index outside the resolvable range");
  return fft::apply_diagonal(f, [&](std::size_t, std::span<const double> xi) -> cplx {
    double u = std::ldexp(xi[axis], -j);
    return v == Variant::Psi ? LittlewoodPaleyFamily::psi(u) : LittlewoodPaleyFamily::psi_b(u);
  });
}

double default_q(double s1) {
  if (!(s1 > 0 && s1 < 1)) throw precondition_error("s_1 must lie in (0,1)");
  if (s1 <= 0.5) return 2 / s1;
  double q = (std::floor(8 / s1 + 1e-12) + 1) / 8;
  if (q >= 2) q = 0.5 * (1 / s1 + 2);
  return q;
}

PointwiseReport pointwise_estimate_check(const MultiplierSymbol& sigma, const SampledFunction& f, double q) {
  const std::size_t n = f.dim();
  if (n != sigma.dim()) throw precondition_error("dimension mismatch");
  const double s1 = sigma.s()[0];
  if (!(q > 1 / s1)) throw precondition_error("pointwise estimate needs q > 1/s_1");
  if (s1 <= 0.5) warn("pointwise estimate outside the s_1 > 1/2 regime; q chosen freely");
  PointwiseReport rep;
  rep.q = q;
  rep.k_tilde = marcinkiewicz_constant(sigma, k_tilde_weight(sigma)).K;

  std::vector<DyadicRange> ranges;
  for (const Axis& a : f.axes()) {
    ranges.push_back(LittlewoodPaleyFamily::resolvable(frequency_axis(a)));
    if (ranges.back().empty()) throw precondition_error("empty resolvable range");
  }
  std::vector<cplx> spec = f.values();
  auto shape = f.shape();
  fft::transform(spec, shape, -1);
  auto freqs = fft::frequencies(f.axes());
  std::vector<cplx> sig(spec.size());
  std::vector<std::vector<double>> xis(spec.size(), std::vector<double>(n));
  for (std::size_t k = 0; k < spec.size(); ++k) {
    auto idx = f.unflatten(k);
    for (std::size_t d = 0; d < n; ++d) xis[k][d] = freqs[d][idx[d]];
    sig[k] = sigma(xis[k]);
  }
  const double inv_n = 1.0 / static_cast<double>(spec.size());

  struct Piece {
    std::vector<int> j;
    std::vector<double> lhs, rhs;
  };
  std::vector<Piece> pieces;
  double rhs_max = 0;
  std::vector<int> j(n);
  for (std::size_t i = 0; i < n; ++i) j[i] = ranges[i].j_min;
  std::vector<double> u(n);
  for (;;) {
    std::vector<cplx> a(spec.size()), b(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
      for (std::size_t d = 0; d < n; ++d) u[d] = std::ldexp(xis[k][d], -j[d]);
      a[k] = LittlewoodPaleyFamily::psi_tensor(u) * sig[k] * spec[k] * inv_n;
      b[k] = LittlewoodPaleyFamily::psi_b_tensor(u) * spec[k] * inv_n;
    }
    fft::transform(a, shape, +1);
    fft::transform(b, shape, +1);
    for (cplx& z : b) z = std::abs(z);
    auto m = asymptotics::strong_maximal(SampledFunction(f.axes(), std::move(b)), q, asymptotics::Boundary::Periodic);
    Piece pc{j, {}, {}};
    for (std::size_t k = 0; k < a.size(); ++k) {
      pc.lhs.push_back(std::abs(a[k]));
      pc.rhs.push_back(rep.k_tilde * m[k].real());
      rhs_max = std::max(rhs_max, pc.rhs.back());
    }
    pieces.push_back(std::move(pc));
    std::size_t d = 0;
    while (d < n && ++j[d] > ranges[d].j_max) {
      j[d] = ranges[d].j_min;
      ++d;
    }
    if (d == n) break;
  }
  rep.pieces = pieces.size();
  const double floor = 1e-8 * rhs_max;
  for (const Piece& pc : pieces) {
    for (std::size_t k = 0; k < pc.lhs.size(); ++k) {
      if (!(pc.rhs[k] > floor)) continue;
      double r = pc.lhs[k] / pc.rhs[k];
      if (r > rep.envelope) {
        rep.envelope = r;
        rep.argmax = pc.j;
      }
    }
  }
  return rep;
}

GrowthReport imaginary_order_growth_check(const SampledFunction& f, const std::vector<double>& t_grid,
                                          const weights::WeightFunction& w) {
  const double base = rearrange::lorentz_norm(f, w);
  if (!(base > 0)) throw precondition_error("f must be nonzero");
  GrowthReport rep;
  std::vector<double> lt, lr;
  for (double t : t_grid) {
    std::vector<cplx> order(f.dim(), cplx{0.0, t});
    double r = rearrange::lorentz_norm(gamma_apply(f, order), w) / base;
    rep.t.push_back(t);
    rep.ratio.push_back(r);
    if (t >= 1) {
      lt.push_back(std::log(t));
      lr.push_back(std::log(r));
    }
  }
  if (lt.size() >= 2) {
    std::vector<double> one(lt.size(), 1.0);
    rep.degree = detail::least_squares({lt, one}, lr)[0];
  }
  rep.pass = rep.degree <= static_cast<double>(f.dim()) + 0.5;
  return rep;
}

double lorentz_growth_envelope(const MultiplierSymbol& sigma, const std::vector<Axis>& axes,
                               const weights::WeightFunction& w, std::size_t battery, std::uint64_t seed,
                               int max_mode) {
  double env = 0;
  for (std::size_t i = 0; i < battery; ++i) {
    auto f = random::band_limited(axes, max_mode, random::stream(seed, i)());
    double den = rearrange::lorentz_norm(f, w);
    if (!(den > 0)) continue;
    env = std::max(env, rearrange::lorentz_norm(apply_multiplier(sigma, f), w) / den);
  }
  return env;
}

}  // namespace mlab::multiplier
