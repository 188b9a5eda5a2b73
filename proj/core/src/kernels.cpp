#include "mlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mlab/errors.hpp"
#include "mlab/multiplier.hpp"
#include "mlab/random.hpp"
#include "numerics.hpp"

namespace mlab::kernels {

using detail::kInf;
using detail::kLn10;

namespace {

constexpr double kTableLo = -690.0;
constexpr double kTableStep = 0.05;
const double kTableHi = std::log(3000.0);

double gk(const auto& f, double a, double b, double tol, unsigned depth = 15) {
  if (!(b > a)) return 0.0;
  return detail::integrate(f, a, b, tol, depth);
}

void check_order(double s) {
  if (!(s > 0 && s < 1)) throw precondition_error("kernel order must lie in (0,1)");
}

}  // namespace

// G_s(x) = sin(pi s/2)/pi int_0^inf e^{-x(1+u)} (u(2+u))^{-s/2} du for x > 0, from
// deforming the inversion contour onto the branch cut above i. Integrated in log u.
double BesselKernel::log_value(double x) const {
  x = std::abs(x);
  if (!(x > 0) || !std::isfinite(x)) throw precondition_error("kernel argument must be finite and nonzero");
  const double s = s_;
  auto logf = [&](double tau) {
    double e = std::exp(tau);
    return tau - x * e - 0.5 * s * (tau + std::log(2 + e));
  };
  auto slope = [&](double tau) {
    double e = std::exp(tau);
    return 1 - 0.5 * s - x * e - 0.5 * s * e / (2 + e);
  };
  double lo = -800, hi = 800;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    (slope(mid) > 0 ? lo : hi) = mid;
  }
  const double peak = 0.5 * (lo + hi);
  const double lpeak = logf(peak);
  auto f = [&](double tau) { return std::exp(logf(tau) - lpeak); };
  double left = peak - 45.0 / (1 - s);
  if (left < 0) left = std::min(left, 0.0) - 90.0;
  std::vector<double> cuts{left};
  if (left < 0 && peak > 0) cuts.push_back(0.0);
  for (double c = cuts.back() + 20; c < peak; c += 20) cuts.push_back(c);
  cuts.push_back(peak);
  cuts.push_back(peak + 2);
  cuts.push_back(peak + 8);
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += gk(f, cuts[i], cuts[i + 1], 1e-12, 8);
  return std::log(std::sin(0.5 * std::numbers::pi * s) / std::numbers::pi) - x + lpeak + std::log(total);
}

BesselKernel::BesselKernel(double s) : s_(s), lx0_(kTableLo), step_(kTableStep) {
  check_order(s);
  auto n = static_cast<std::size_t>(std::ceil((kTableHi - kTableLo) / kTableStep)) + 1;
  lg_.resize(n + 4);
  // two extra points on each side for the derivative stencil
  for (std::size_t k = 0; k < n + 4; ++k)
    lg_[k] = log_value(std::exp(kTableLo + (static_cast<double>(k) - 2) * kTableStep));
  dlg_.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double* p = &lg_[k + 2];
    dlg_[k] = (-p[2] + 8 * p[1] - 8 * p[-1] + p[-2]) / (12 * kTableStep);
  }
  lg_.erase(lg_.begin(), lg_.begin() + 2);
  lg_.resize(n);
}

std::shared_ptr<const BesselKernel> BesselKernel::get(double s) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const BesselKernel>> cache;
  check_order(s);
  {
    std::lock_guard lock(mu);
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
  }
  auto k = std::make_shared<const BesselKernel>(s);
  std::lock_guard lock(mu);
  return cache.emplace(s, std::move(k)).first->second;
}

double BesselKernel::near_coefficient() const {
  return std::sin(0.5 * std::numbers::pi * s_) * std::tgamma(1 - s_) / std::numbers::pi;
}

double BesselKernel::log_value_fast(double lx) const {
  const std::size_t n = lg_.size();
  const double lx1 = lx0_ + static_cast<double>(n - 1) * step_;
  if (lx <= lx0_) return lg_[0] + (s_ - 1) * (lx - lx0_);
  if (lx >= lx1) return lg_[n - 1] - (std::exp(lx) - std::exp(lx1)) + 0.5 * (s_ - 2) * (lx - lx1);
  double u = (lx - lx0_) / step_;
  auto k = std::min(static_cast<std::size_t>(u), n - 2);
  double t = u - static_cast<double>(k);
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * lg_[k] + (t3 - 2 * t2 + t) * step_ * dlg_[k] + (-2 * t3 + 3 * t2) * lg_[k + 1] +
         (t3 - t2) * step_ * dlg_[k + 1];
}

double BesselKernel::log_inverse(double lg) const {
  const std::size_t n = lg_.size();
  const double lx1 = lx0_ + static_cast<double>(n - 1) * step_;
  if (lg >= lg_[0]) return lx0_ + (lg - lg_[0]) / (s_ - 1);
  if (lg <= lg_[n - 1]) {
    // Newton in x on the far-field extrapolation.
    double x1 = std::exp(lx1), x = x1 + (lg_[n - 1] - lg);
    for (int it = 0; it < 50; ++it) {
      double v = lg_[n - 1] - (x - x1) + 0.5 * (s_ - 2) * (std::log(x) - lx1) - lg;
      double dv = -1 + 0.5 * (s_ - 2) / x;
      double step = v / dv;
      x -= step;
      if (std::abs(step) < 1e-14 * x) break;
    }
    return std::log(x);
  }
  // lg_ is decreasing.
  auto it = std::lower_bound(lg_.begin(), lg_.end(), lg, std::greater<>());
  auto k = static_cast<std::size_t>(it - lg_.begin());
  k = std::clamp<std::size_t>(k, 1, n - 1) - 1;
  double a = lx0_ + static_cast<double>(k) * step_, b = a + step_;
  for (int i = 0; i < 100 && b - a > 1e-15 * (1 + std::abs(a)); ++i) {
    double m = 0.5 * (a + b);
    (log_value_fast(m) > lg ? a : b) = m;
  }
  return 0.5 * (a + b);
}

double BesselKernel::integral_to(double x) const {
  if (!(x > 0)) return 0.0;
  const double x0 = std::exp(lx0_);
  double head = std::exp(lg_[0]) * std::min(x, x0) / s_ * std::pow(std::min(x, x0) / x0, s_ - 1);
  if (x <= x0) return head;
  auto f = [&](double lx) { return std::exp(lx + log_value_fast(lx)); };
  double lx = std::log(x), total = head;
  for (double a = lx0_; a < lx; a += 10) total += gk(f, a, std::min(a + 10, lx), 1e-12);
  return total;
}

std::vector<std::pair<double, double>> BesselKernel::table(int per_decade) const {
  std::vector<std::pair<double, double>> out;
  for (double lx : detail::log_lattice(std::log(1e-8), std::log(50.0), per_decade)) {
    double x = std::exp(lx);
    out.emplace_back(x, std::exp(log_value(x)));
  }
  return out;
}

double bessel_eval(double s, double x) {
  check_order(s);
  double ax = std::abs(x);
  if (!(ax >= 1e-8 && ax <= 50)) throw precondition_error("kernel argument outside [1e-8, 50]");
  return std::exp(BesselKernel::get(s)->log_value(x));
}

void write_kernel_csv(double s, std::ostream& out, int per_decade) {
  out << "x,G\n";
  char buf[64];
  for (auto [x, g] : BesselKernel::get(s)->table(per_decade)) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, g);
    out << buf;
  }
}

// ---------------------------------------------------------------------------

namespace {

void check_orders(const std::vector<double>& s) {
  if (s.empty() || s.size() > 3) throw precondition_error("tensor kernels need 1 <= n <= 3");
  for (std::size_t i = 0; i < s.size(); ++i) {
    check_order(s[i]);
    if (i > 0 && s[i] < s[i - 1]) throw precondition_error("orders must be sorted ascending");
  }
}

// Layer cake on (0, inf)^n: F_k(l) = |{x : sum_{i>=k} log G_i(x_i) > l}|.
class LayerCake {
 public:
  explicit LayerCake(const std::vector<double>& s) {
    for (double v : s) g_.push_back(BesselKernel::get(v));
  }

  double operator()(std::size_t k, double l) const {
    const BesselKernel& g = *g_[k];
    if (k + 1 == g_.size()) return std::exp(g.log_inverse(l));
    auto f = [&](double tau) { return std::exp(tau) * (*this)(k + 1, l - g.log_value_fast(tau)); };
    const double tc = g.log_inverse(l);
    std::vector<double> cuts{tc - 45, tc - 15, tc - 5, tc};
    const double top = std::log(200.0);
    for (double c = tc + 20; c < std::max(tc, 0.0); c += 20) cuts.push_back(c);
    for (double c : {0.0, std::log(5.0), std::log(20.0), top})
      if (c > cuts.back()) cuts.push_back(c);
    if (cuts.back() < tc + 5) cuts.push_back(tc + 5);
    const double tol = k == 0 ? 1e-9 : 1e-11;
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += gk(f, cuts[i], cuts[i + 1], tol, 12);
    return total;
  }

 private:
  std::vector<std::shared_ptr<const BesselKernel>> g_;
};

}  // namespace

double tensor_kernel_measure(const std::vector<double>& s, double lambda) {
  check_orders(s);
  if (!(lambda > 0)) throw precondition_error("level must be positive");
  return std::ldexp(LayerCake(s)(0, std::log(lambda)), static_cast<int>(s.size()));
}

KernelTailFit tensor_kernel_distribution(const std::vector<double>& s, const std::vector<double>& lambda_grid) {
  check_orders(s);
  int d = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i] - s[0]) <= 1e-12) ++d;
  KernelTailFit out;
  LayerCake cake(s);
  std::vector<double> ly;
  double emin = kInf, emax = -kInf;
  for (double lam : lambda_grid) {
    if (!(lam >= 2)) throw precondition_error("levels must be at least 2");
    double l = std::log(lam);
    double mu = std::ldexp(cake(0, l), static_cast<int>(s.size()));
    if (!(mu > 0) || !std::isfinite(mu)) throw convergence_error("layer-cake quadrature failed");
    out.lambda.push_back(lam);
    out.measure.push_back(mu);
    ly.push_back(std::log(mu));
    double e = std::log(mu) + l / (1 - s[0]) - d * detail::loglog_e_plus_exp(l);
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  out.fit = asymptotics::fit_power_log(out.lambda, ly);
  out.fit.c_low = std::exp(emin);
  out.fit.c_high = std::exp(emax);
  return out;
}

rearrange::RearrangementProfile tensor_kernel_profile(const std::vector<double>& s, int per_decade) {
  check_orders(s);
  if (per_decade < 1) throw precondition_error("per_decade must be positive");
  struct Cells {
    std::vector<double> avg, width;
  };
  std::vector<Cells> axes;
  std::vector<double> edges{0.0};
  for (double lx : detail::log_lattice(std::log(1e-7), std::log(50.0), per_decade)) edges.push_back(std::exp(lx));
  for (double v : s) {
    auto g = BesselKernel::get(v);
    Cells c;
    double prev = 0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      double cum = g->integral_to(edges[i]);
      double w = edges[i] - edges[i - 1];
      c.avg.push_back((cum - prev) / w);
      c.width.push_back(w);
      prev = cum;
    }
    axes.push_back(std::move(c));
  }
  const double sym = std::ldexp(1.0, static_cast<int>(s.size()));
  std::vector<std::pair<double, double>> pieces;
  const std::size_t m = edges.size() - 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < s.size(); ++i) total *= m;
  pieces.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double v = 1, w = sym;
    std::size_t rest = flat;
    for (const Cells& c : axes) {
      std::size_t k = rest % m;
      rest /= m;
      v *= c.avg[k];
      w *= c.width[k];
    }
    pieces.emplace_back(v, w);
  }
  return rearrange::RearrangementProfile::from_pieces(std::move(pieces));
}

LowerBoundReport rearrangement_lower_bound_check(const std::vector<double>& s, int d,
                                                 const std::vector<double>& t_grid, int per_decade) {
  check_orders(s);
  if (t_grid.empty()) throw precondition_error("empty tGrid");
  for (double t : t_grid)
    if (!(t > 0 && t <= 1e-2)) throw precondition_error("tGrid must lie in (0, 1e-2]");
  auto envelope = [&](int pd) {
    auto prof = tensor_kernel_profile(s, pd);
    double lo = kInf, hi = 0;
    for (double t : t_grid) {
      double lt = std::log(t);
      double model = (s[0] - 1) * lt + (1 - s[0]) * d * detail::loglog_e_plus_exp(-lt);
      double r = prof.at(t) / std::exp(model);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return std::pair{lo, hi};
  };
  LowerBoundReport rep;
  std::tie(rep.inf_ratio, rep.sup_ratio) = envelope(per_decade);
  std::tie(rep.inf_refined, rep.sup_refined) = envelope(2 * per_decade);
  rep.stable = std::abs(rep.inf_refined / rep.inf_ratio - 1) <= 0.15 &&
               std::abs(rep.sup_refined / rep.sup_ratio - 1) <= 0.15;
  rep.pass = rep.inf_ratio > 0 && rep.inf_refined > 0 && std::isfinite(rep.sup_ratio) && rep.stable;
  return rep;
}

EmbeddingReport embedding_ratio(const std::vector<double>& s, int d, std::size_t battery,
                                const std::vector<Axis>& axes, int max_mode, std::uint64_t seed) {
  check_orders(s);
  if (axes.size() != s.size()) throw precondition_error("one order per axis");
  if (battery < 1) throw precondition_error("empty battery");
  auto lam = weights::WeightFunction::phi(s[0], (1 - s[0]) * d);
  auto mw = weights::WeightFunction::phi(1 - s[0], d * (s[0] - 1));
  EmbeddingReport rep;
  rep.kernel_norm = rearrange::marcinkiewicz_norm(tensor_kernel_profile(s, s.size() == 3 ? 12 : 32), mw);
  std::vector<cplx> order;
  for (double v : s) order.emplace_back(v, 0.0);
  for (std::size_t i = 0; i < battery; ++i) {
    auto g = random::band_limited(axes, max_mode, random::stream(seed, i)());
    double ln = rearrange::lorentz_norm(g, lam);
    if (!(ln > 0)) continue;
    auto f = multiplier::gamma_apply(g, order, multiplier::Direction::Inverse);
    double r = f.sup_norm() / ln;
    rep.max_ratio = std::max(rep.max_ratio, r);
    rep.chain_max = std::max(rep.chain_max, r / rep.kernel_norm);
    ++rep.cases;
  }
  return rep;
}

std::vector<double> default_necessity_grid() {
  std::vector<double> out;
  for (int k = 3; k <= 15; ++k) out.push_back(-k * kLn10);
  return out;
}

NecessityReport necessity_divergence(double s1, int d, double beta, std::vector<double> log_t) {
  check_order(s1);
  if (log_t.size() < 2) throw precondition_error("tGrid needs two points");
  for (std::size_t i = 1; i < log_t.size(); ++i)
    if (!(log_t[i] < log_t[i - 1])) throw precondition_error("tGrid must be decreasing");
  if (log_t.back() > std::log(1e-15) + 1e-9) throw precondition_error("tGrid must reach 1e-15");
  // The t^{s_1} factors cancel; dropping them keeps the difference exact for |log t| ~ 1e250.
  const double gap = (1 - s1) * d - beta;
  NecessityReport rep;
  auto push = [&](double lt) {
    rep.log_t.push_back(lt);
    rep.log_r.push_back(gap * detail::loglog_e_plus_exp(-lt));
  };
  for (double lt : log_t) push(lt);
  auto assess = [&] {
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.log_r.size(); ++i)
      if (rep.log_r[i] < rep.log_r[i - 1] - 1e-15 * (1 + std::abs(rep.log_r[i]))) rep.monotone = false;
    rep.log_factor = rep.log_r.back() - rep.log_r.front();
    rep.diverges = rep.monotone && rep.log_factor > std::log(10.0);
  };
  assess();
  while (rep.monotone && !rep.diverges && std::abs(rep.log_t.back()) < 1e250) {
    push(rep.log_t.back() * 10);
    assess();
  }
  return rep;
}

}  // namespace mlab::kernels
