#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mlab/asymptotics.hpp"
#include "mlab/errors.hpp"
#include "mlab/random.hpp"

using namespace mlab;
using namespace mlab::asymptotics;

namespace {

SampledFunction random_grid(std::vector<Axis> axes, std::uint64_t seed) {
  auto rng = random::stream(seed, 0);
  std::exponential_distribution<double> e;
  std::bernoulli_distribution zero(0.3);
  auto f = SampledFunction::zeros(std::move(axes));
  for (auto& z : f.mutable_values()) z = zero(rng) ? 0.0 : std::polar(e(rng), 1.0);
  return f;
}

// Direct sum over every centered rectangle with half-widths 0, 1, 2, 4, ...
double brute_maximal(const SampledFunction& f, double q, std::size_t at, Boundary b) {
  const std::size_t n = f.dim();
  auto idx = f.unflatten(at);
  std::vector<std::vector<long>> hws(n);
  for (std::size_t d = 0; d < n; ++d) {
    long cnt = long(f.axis(d).count);
    hws[d].push_back(0);
    for (long h = 1; b == Boundary::Zero ? h <= cnt : 2 * h + 1 <= cnt; h *= 2) hws[d].push_back(h);
  }
  double best = 0;
  std::vector<std::size_t> pick(n, 0);
  for (;;) {
    double sum = 0, count = 1;
    for (std::size_t d = 0; d < n; ++d) count *= 2 * hws[d][pick[d]] + 1;
    std::vector<long> off(n);
    for (std::size_t d = 0; d < n; ++d) off[d] = -hws[d][pick[d]];
    for (;;) {
      bool inside = true;
      std::vector<std::size_t> j(n);
      for (std::size_t d = 0; d < n; ++d) {
        long cnt = long(f.axis(d).count), v = long(idx[d]) + off[d];
        if (b == Boundary::Periodic) v = ((v % cnt) + cnt) % cnt;
        inside = inside && v >= 0 && v < cnt;
        j[d] = std::size_t(v);
      }
      if (inside) sum += std::pow(std::abs(f[f.flatten(j)]), q);
      std::size_t d = 0;
      while (d < n && ++off[d] > hws[d][pick[d]]) off[d] = -hws[d][pick[d]], ++d;
      if (d == n) break;
    }
    best = std::max(best, std::pow(sum / count, 1 / q));
    std::size_t d = 0;
    while (d < n && ++pick[d] == hws[d].size()) pick[d++] = 0;
    if (d == n) break;
  }
  return best;
}

}  // namespace

TEST(Maximal, MatchesBruteForce) {
  for (Boundary b : {Boundary::Zero, Boundary::Periodic})
    for (std::uint64_t seed = 0; seed < 3; ++seed)
      for (auto axes : {std::vector<Axis>{Axis{0, 1, 16}}, std::vector<Axis>{Axis{0, 1, 8}, Axis{0, 1, 4}},
                        std::vector<Axis>{Axis{0, 1, 4}, Axis{0, 1, 4}, Axis{0, 1, 2}}}) {
        auto f = random_grid(axes, seed);
        for (double q : {1.0, 2.0, 3.5}) {
          auto m = strong_maximal(f, q, b);
          for (std::size_t i = 0; i < f.size(); ++i) {
            double ref = brute_maximal(f, q, i, b);
            EXPECT_NEAR(m[i].real(), ref, 1e-12 * (1 + ref));
            EXPECT_NEAR(strong_maximal_at(f, q, i, b), ref, 1e-12 * (1 + ref));
          }
        }
      }
}

TEST(Maximal, ConstantIsFixedPeriodic) {
  auto f = SampledFunction::sample({Axis{0, 1, 8}, Axis{0, 1, 8}}, [](std::span<const double>) { return cplx(2.0); });
  auto m = strong_maximal(f, 2.0, Boundary::Periodic);
  for (const auto& z : m.values()) EXPECT_NEAR(z.real(), 2.0, 1e-14);
}

TEST(Maximal, Preconditions) {
  auto f = SampledFunction::zeros({Axis{0, 1, 4}});
  EXPECT_THROW(strong_maximal(f, 0.5), precondition_error);
  EXPECT_THROW(strong_maximal_at(f, 2, 4), std::out_of_range);
}

TEST(Maximal, NearestIndex) {
  auto f = SampledFunction::zeros({Axis{0, 1, 4}, Axis{0, 2, 4}});
  auto i = nearest_index(f, {0.0, 0.9});
  auto idx = f.unflatten(i);
  EXPECT_EQ(idx[0], 2u);
  EXPECT_EQ(idx[1], 3u);
}

// ---------------------------------------------------------------- properties

TEST(Property, DominatesPointValue) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = random_grid({Axis{0, 1, 16}, Axis{0, 1, 8}}, seed);
    auto m = strong_maximal(f, 2.0);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_GE(m[i].real(), std::abs(f[i]));
  }
}

TEST(Property, NondecreasingInQ) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = random_grid({Axis{0, 1, 32}}, seed);
    auto a = strong_maximal(f, 1.0), b = strong_maximal(f, 2.0), c = strong_maximal(f, 4.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_LE(a[i].real(), b[i].real() * (1 + 1e-12));
      EXPECT_LE(b[i].real(), c[i].real() * (1 + 1e-12));
    }
  }
}

TEST(Property, SublinearAndHomogeneous) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = random_grid({Axis{0, 1, 16}, Axis{0, 1, 4}}, seed);
    auto g = random_grid({Axis{0, 1, 16}, Axis{0, 1, 4}}, seed + 50);
    std::vector<cplx> sum(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f[i] + g[i];
    auto ms = strong_maximal(SampledFunction(f.axes(), sum), 2.0);
    auto mf = strong_maximal(f, 2.0), mg = strong_maximal(g, 2.0);
    auto m3 = strong_maximal(f.map([](cplx z) { return -3.0 * z; }), 2.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_LE(ms[i].real(), (mf[i].real() + mg[i].real()) * (1 + 1e-12));
      EXPECT_NEAR(m3[i].real(), 3 * mf[i].real(), 1e-12 * mf[i].real());
    }
  }
}
