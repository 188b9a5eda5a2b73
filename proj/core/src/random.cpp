#include "mlab/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mlab/fft.hpp"

namespace mlab::random {

std::mt19937_64 stream(std::uint64_t root, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
  return std::mt19937_64(seq);
}

namespace {

cplx mode_coefficient(std::uint64_t seed, const std::vector<long>& m) {
  std::uint64_t key = 0x9e3779b97f4a7c15ull;
  for (long v : m) key = (key ^ static_cast<std::uint64_t>(v + 1000003)) * 0x100000001b3ull;
  auto g = stream(seed, key);
  std::normal_distribution<double> nd;
  double re = nd(g);
  double im = nd(g);
  return {re, im};
}

}  // namespace

SampledFunction band_limited(const std::vector<Axis>& axes, int max_mode, std::uint64_t seed,
                             bool real_valued) {
  if (max_mode < 0) throw std::invalid_argument("max_mode must be nonnegative");
  for (const Axis& a : axes)
    if (a.count < static_cast<std::size_t>(2 * max_mode + 2))
      throw std::invalid_argument("grid too coarse for requested modes");
  SampledFunction out = SampledFunction::zeros(axes);
  auto& data = out.mutable_values();
  const std::size_t n = axes.size();
  std::vector<long> m(n, -max_mode);
  for (;;) {
    cplx c = mode_coefficient(seed, m);
    if (real_valued) {
      std::vector<long> neg(m);
      for (long& v : neg) v = -v;
      c = 0.5 * (c + std::conj(mode_coefficient(seed, neg)));
    }
    std::size_t flat = 0;
    double phase = 0;
    for (std::size_t d = 0; d < n; ++d) {
      auto cnt = static_cast<long>(axes[d].count);
      flat = flat * axes[d].count + static_cast<std::size_t>((m[d] + cnt) % cnt);
      phase += static_cast<double>(m[d]) * (axes[d].center - axes[d].half_width) /
               (2.0 * axes[d].half_width);
    }
    data[flat] = c * std::polar(1.0, 2.0 * std::numbers::pi * phase);
    std::size_t d = n;
    while (d-- > 0) {
      if (++m[d] <= max_mode) break;
      m[d] = -max_mode;
    }
    if (d == static_cast<std::size_t>(-1)) break;
  }
  fft::transform(data, out.shape(), +1);
  if (real_valued)
    for (cplx& z : data) z = {z.real(), 0.0};
  return out;
}

}  // namespace mlab::random
