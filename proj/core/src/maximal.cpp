#include <array>
#include <cmath>
#include <stdexcept>

#include "mlab/asymptotics.hpp"
#include "mlab/errors.hpp"

namespace mlab::asymptotics {

namespace {

// Summed-area table of |f|^q with one padding slot per axis.
class Prefix {
 public:
  Prefix(const SampledFunction& f, double q) : n_(f.dim()) {
    for (std::size_t d = 0; d < n_; ++d) ext_[d] = f.axis(d).count + 1;
    std::size_t total = 1;
    for (std::size_t d = 0; d < n_; ++d) total *= ext_[d];
    p_.assign(total, 0.0L);
    for (std::size_t i = 0; i < f.size(); ++i) {
      auto idx = f.unflatten(i);
      std::array<std::size_t, 3> e{};
      for (std::size_t d = 0; d < n_; ++d) e[d] = idx[d] + 1;
      p_[flat(e)] = std::pow(static_cast<long double>(std::abs(f[i])), static_cast<long double>(q));
    }
    std::size_t stride = 1;
    for (std::size_t d = n_; d-- > 0;) {
      for (std::size_t i = 0; i < total; ++i)
        if ((i / stride) % ext_[d] != 0) p_[i] += p_[i - stride];
      stride *= ext_[d];
    }
  }

  // Sum over the half-open index box [lo, hi).
  long double box(const std::array<std::size_t, 3>& lo, const std::array<std::size_t, 3>& hi) const {
    long double s = 0;
    for (unsigned mask = 0; mask < (1u << n_); ++mask) {
      std::array<std::size_t, 3> c{};
      int sign = 1;
      for (std::size_t d = 0; d < n_; ++d) {
        if (mask & (1u << d)) {
          c[d] = lo[d];
          sign = -sign;
        } else {
          c[d] = hi[d];
        }
      }
      s += sign * p_[flat(c)];
    }
    return s;
  }

 private:
  std::size_t n_;
  std::array<std::size_t, 3> ext_{1, 1, 1};
  std::vector<long double> p_;

  std::size_t flat(const std::array<std::size_t, 3>& e) const {
    std::size_t f = 0;
    for (std::size_t d = 0; d < n_; ++d) f = f * ext_[d] + e[d];
    return f;
  }
};

std::vector<long> half_widths(std::size_t count, Boundary b) {
  std::vector<long> hw{0};
  auto n = static_cast<long>(count);
  for (long h = 1;; h *= 2) {
    if (b == Boundary::Periodic && 2 * h + 1 > n) break;
    hw.push_back(h);
    if (b == Boundary::Zero && h >= n) break;
  }
  return hw;
}

double maximal_at(const SampledFunction& f, const Prefix& pre, double q, Boundary b,
                  const std::vector<std::vector<long>>& hws, std::size_t flat_index) {
  const std::size_t n = f.dim();
  auto idx = f.unflatten(flat_index);
  double best = std::abs(f[flat_index]);
  std::array<std::size_t, 3> pick{0, 0, 0};
  for (;;) {
    bool trivial = true;
    long double count = 1;
    for (std::size_t d = 0; d < n; ++d) {
      long h = hws[d][pick[d]];
      trivial = trivial && h == 0;
      count *= static_cast<long double>(2 * h + 1);
    }
    if (!trivial) {
      // Per axis: up to two index segments.
      std::array<std::array<std::pair<std::size_t, std::size_t>, 2>, 3> seg{};
      std::array<int, 3> nseg{1, 1, 1};
      for (std::size_t d = 0; d < n; ++d) {
        auto cnt = static_cast<long>(f.axis(d).count);
        long h = hws[d][pick[d]];
        long lo = static_cast<long>(idx[d]) - h, hi = static_cast<long>(idx[d]) + h + 1;
        if (b == Boundary::Zero) {
          seg[d][0] = {static_cast<std::size_t>(std::max(lo, 0L)), static_cast<std::size_t>(std::min(hi, cnt))};
        } else if (lo < 0) {
          seg[d][0] = {0, static_cast<std::size_t>(hi)};
          seg[d][1] = {static_cast<std::size_t>(lo + cnt), static_cast<std::size_t>(cnt)};
          nseg[d] = 2;
        } else if (hi > cnt) {
          seg[d][0] = {static_cast<std::size_t>(lo), static_cast<std::size_t>(cnt)};
          seg[d][1] = {0, static_cast<std::size_t>(hi - cnt)};
          nseg[d] = 2;
        } else {
          seg[d][0] = {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
        }
      }
      long double s = 0;
      std::array<int, 3> c{0, 0, 0};
      for (;;) {
        std::array<std::size_t, 3> lo{}, hi{};
        for (std::size_t d = 0; d < n; ++d) {
          lo[d] = seg[d][c[d]].first;
          hi[d] = seg[d][c[d]].second;
        }
        s += pre.box(lo, hi);
        std::size_t d = 0;
        while (d < n && ++c[d] == nseg[d]) c[d++] = 0;
        if (d == n) break;
      }
      double avg = static_cast<double>(std::max(s, 0.0L) / count);
      best = std::max(best, std::pow(avg, 1.0 / q));
    }
    std::size_t d = 0;
    while (d < n && ++pick[d] == hws[d].size()) pick[d++] = 0;
    if (d == n) break;
  }
  return best;
}

std::vector<std::vector<long>> all_half_widths(const SampledFunction& f, Boundary b) {
  std::vector<std::vector<long>> hws;
  for (const Axis& a : f.axes()) hws.push_back(half_widths(a.count, b));
  return hws;
}

}  // namespace

SampledFunction strong_maximal(const SampledFunction& f, double q, Boundary b) {
  if (!(q >= 1)) throw precondition_error("strong_maximal needs q >= 1");
  Prefix pre(f, q);
  auto hws = all_half_widths(f, b);
  SampledFunction out = SampledFunction::zeros(f.axes());
  for (std::size_t i = 0; i < f.size(); ++i) out.mutable_values()[i] = maximal_at(f, pre, q, b, hws, i);
  return out;
}

double strong_maximal_at(const SampledFunction& f, double q, std::size_t flat_index, Boundary b) {
  if (!(q >= 1)) throw precondition_error("strong_maximal needs q >= 1");
  if (flat_index >= f.size()) throw std::out_of_range("strong_maximal_at index");
  Prefix pre(f, q);
  return maximal_at(f, pre, q, b, all_half_widths(f, b), flat_index);
}

std::size_t nearest_index(const SampledFunction& f, const std::vector<double>& x) {
  if (x.size() != f.dim()) throw std::invalid_argument("point dimension mismatch");
  std::vector<std::size_t> idx(f.dim());
  for (std::size_t d = 0; d < f.dim(); ++d) idx[d] = f.axis(d).nearest(x[d]);
  return f.flatten(idx);
}

}  // namespace mlab::asymptotics
