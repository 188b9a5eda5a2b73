#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "mlab/random.hpp"
#include "mlab/rearrange.hpp"

using namespace mlab;
using namespace mlab::rearrange;
using weights::WeightFunction;

namespace {

// Values drawn with deliberate ties and zeros.
SampledFunction random_function(std::uint64_t seed, std::size_t count = 64) {
  auto rng = random::stream(seed, 0);
  std::uniform_int_distribution<int> level(0, 6);
  std::normal_distribution<double> g;
  std::vector<cplx> v(count);
  for (auto& z : v) z = seed % 2 ? cplx(level(rng)) : cplx(g(rng), g(rng));
  return SampledFunction({Axis{0, 2, count}}, v);
}

std::vector<double> sorted_magnitudes(const SampledFunction& f) {
  std::vector<double> m;
  for (const auto& z : f.values()) m.push_back(std::abs(z));
  std::sort(m.rbegin(), m.rend());
  return m;
}

// int_0^t of the sorted-sample step function.
double brute_integral(const std::vector<double>& m, double cm, double t) {
  double acc = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double lo = i * cm, hi = std::min(t, (i + 1) * cm);
    if (hi > lo) acc += m[i] * (hi - lo);
  }
  return acc;
}

}  // namespace

TEST(Profile, MatchesSortedSamples) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto f = random_function(seed);
    auto m = sorted_magnitudes(f);
    double cm = f.cell_measure();
    auto p = rearrangement(f);
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_DOUBLE_EQ(p.at((i + 0.5) * cm), m[i]);
    EXPECT_EQ(p.at(m.size() * cm + 1), 0.0);
    for (double t : {0.01, 0.3, 1.0, 3.9, 10.0}) {
      EXPECT_NEAR(p.integral_to(t), brute_integral(m, cm, t), 1e-12);
      EXPECT_NEAR(double_star(p, t), brute_integral(m, cm, t) / t, 1e-12);
    }
  }
}

TEST(Profile, FromPiecesGroupsEqualValues) {
  auto p = RearrangementProfile::from_pieces({{2.0, 1.0}, {5.0, 0.5}, {2.0, 0.25}, {0.0, 9.0}});
  ASSERT_EQ(p.steps(), 2u);
  EXPECT_DOUBLE_EQ(p.values()[0], 5.0);
  EXPECT_DOUBLE_EQ(p.breaks()[1], 1.75);
  EXPECT_DOUBLE_EQ(p.total_integral(), 2.5 + 2.5);
}

TEST(Distribution, BruteForceCount) {
  auto f = random_function(3);
  for (double tau : {0.0, 0.5, 1.0, 2.0, 5.5, 6.0}) {
    double n = 0;
    for (const auto& z : f.values()) n += std::abs(z) > tau;
    EXPECT_DOUBLE_EQ(distribution_function(f, tau), n * f.cell_measure());
  }
}

TEST(Lorentz, AbelSummation) {
  for (double s : {0.3, 0.5, 0.8}) {
    auto w = WeightFunction::phi(s, 0.5 * s);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto f = random_function(seed);
      auto m = sorted_magnitudes(f);
      double cm = f.cell_measure(), acc = 0;
      for (std::size_t i = 0; i < m.size(); ++i) acc += m[i] * (w((i + 1) * cm) - (i ? w(i * cm) : 0.0));
      EXPECT_NEAR(lorentz_norm(f, w), acc, 1e-12 * acc);
    }
  }
}

TEST(Lorentz, LinearWeightIsL1) {
  auto f = random_function(4);
  EXPECT_NEAR(lorentz_norm(f, WeightFunction::parse("t")), f.lp_norm(1), 1e-12);
}

TEST(Marcinkiewicz, LinearWeightIsL1) {
  auto f = random_function(2);
  EXPECT_NEAR(marcinkiewicz_norm(f, WeightFunction::parse("t")), f.lp_norm(1), 1e-10);
}

TEST(Marcinkiewicz, PowerWeightPiecewiseMaximum) {
  // On a step of height v starting at a, t^{-1/2} F(t) = t^{-1/2} (c + v t) with
  // c = F(a) - v a peaks at t = c / v.
  auto w = WeightFunction::parse("t^0.5");
  auto f = random_function(6);
  auto m = sorted_magnitudes(f);
  double cm = f.cell_measure(), best = 0;
  auto g = [&](double t) { return brute_integral(m, cm, t) / std::sqrt(t); };
  for (std::size_t i = 0; i < m.size(); ++i) {
    double a = i * cm, b = (i + 1) * cm;
    if (i) best = std::max(best, g(a));
    best = std::max(best, g(b));
    if (m[i] > 0) {
      double t = (brute_integral(m, cm, a) - m[i] * a) / m[i];
      if (t > a && t < b) best = std::max(best, g(t));
    }
  }
  EXPECT_NEAR(marcinkiewicz_norm(f, w), best, 1e-9 * best);
}

TEST(Weak, BruteForce) {
  auto f = random_function(7);
  auto m = sorted_magnitudes(f);
  double cm = f.cell_measure(), best = 0;
  for (std::size_t i = 0; i < m.size(); ++i) best = std::max(best, std::pow((i + 1) * cm, 0.5) * m[i]);
  EXPECT_NEAR(weak_norm(f, 2.0), best, 1e-13);
}

TEST(Hardy, PowerWeightExactConstant) {
  // For w = t^s and p = 1 the constant sum 2^{-k} m(2^k) is sum 2^{k(s-1)}.
  auto w = WeightFunction::parse("t^0.4");
  double expect = 0;
  for (int k = 1; k < 200; ++k) expect += std::pow(2.0, k * (0.4 - 1));
  EXPECT_NEAR(hardy_constant(w, 1.0), expect, 1e-10);
  auto r = check_hardy(random_function(5), w, 1.0);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.ratio, 1 / (1 - 0.4) + 1e-9);
}

TEST(Sunrise, NoGainWhenBetaBelowAlpha) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto r = check_sunrise(random_function(seed), 0.5, 0.3, 1.0);
    EXPECT_TRUE(r.finite);
    EXPECT_NEAR(r.ratio, 1.0, 1e-6);
  }
}

TEST(HausdorffYoung, UnimodularFactorInvariance) {
  auto w = WeightFunction::phi(0.7, 1.0);
  auto f = random::band_limited({Axis{0, 8, 128}}, 6, 1);
  auto g = f.map([](cplx z) { return z * std::polar(1.0, 0.7); });
  auto a = hausdorff_young_lorentz(f, w);
  auto b = hausdorff_young_lorentz(g, w);
  EXPECT_NEAR(a.ratio, b.ratio, 1e-12 * a.ratio);
  EXPECT_GT(a.ratio, 0);
}

// ---------------------------------------------------------------- properties

TEST(Property, Equimeasurable) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto f = random_function(seed, std::size_t(8) << (seed % 5));
    auto p = rearrangement(f);
    std::vector<double> taus{0.0};
    for (const auto& z : f.values()) {
      double a = std::abs(z);
      taus.insert(taus.end(), {a, std::nextafter(a, 0.0), std::nextafter(a, 1e9), 0.5 * a});
    }
    for (double tau : taus) EXPECT_EQ(p.measure_above(tau), distribution_function(f, tau)) << seed << ' ' << tau;
  }
}

TEST(Property, DoubleStarDominatesAndDecreases) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = rearrangement(random_function(seed));
    double prev = INFINITY;
    for (double t = 1e-3; t < 20; t *= 1.1) {
      double ds = double_star(p, t);
      EXPECT_GE(ds, p.at(t) * (1 - 1e-14));
      EXPECT_LE(ds, prev * (1 + 1e-14));
      prev = ds;
    }
  }
}

TEST(Property, RearrangementIgnoresPermutation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = random_function(seed);
    auto v = f.values();
    auto rng = random::stream(seed, 99);
    std::shuffle(v.begin(), v.end(), rng);
    SampledFunction g(f.axes(), v);
    auto a = rearrangement(f), b = rearrangement(g);
    EXPECT_EQ(a.values(), b.values());
    EXPECT_EQ(a.breaks(), b.breaks());
  }
}

TEST(Property, Holder) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto rng = random::stream(seed, 7);
    std::uniform_real_distribution<double> u(0, 1);
    double s = 0.1 + 0.8 * u(rng), b = -2 + 5 * u(rng);
    auto f = random_function(seed), g = random_function(seed + 1000);
    auto r = check_holder(f, g, WeightFunction::phi(s, b));
    EXPECT_LE(r.lhs, r.rhs * (1 + 1e-9)) << s << ' ' << b;
  }
}

TEST(Property, HardyWithinConstant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rng = random::stream(seed, 8);
    std::uniform_real_distribution<double> u(0, 1);
    double s = 0.1 + 0.6 * u(rng), b = -1 + 3 * u(rng), p = std::min(1.0, s + 0.15 + u(rng) * (1.05 - s));
    auto r = check_hardy(random_function(seed), WeightFunction::phi(s, b), p);
    EXPECT_TRUE(r.pass) << s << ' ' << b << ' ' << p << ' ' << r.ratio << ' ' << r.bound;
  }
}

TEST(Property, LorentzHomogeneousAndMonotone) {
  auto w = WeightFunction::omega(0.5, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = random_function(seed);
    double n = lorentz_norm(f, w);
    EXPECT_NEAR(lorentz_norm(f.map([](cplx z) { return 3.0 * z; }), w), 3 * n, 1e-12 * n);
    auto smaller = f.map([](cplx z) { return 0.5 * z; });
    EXPECT_LE(lorentz_norm(smaller, w), n);
  }
}
