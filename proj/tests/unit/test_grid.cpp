#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "mlab/fft.hpp"
#include "mlab/grid.hpp"
#include "mlab/random.hpp"

using namespace mlab;

namespace {

SampledFunction random_function(std::vector<Axis> axes, std::uint64_t seed) {
  auto rng = random::stream(seed, 0);
  std::normal_distribution<double> g;
  SampledFunction f = SampledFunction::zeros(std::move(axes));
  for (auto& z : f.mutable_values()) z = {g(rng), g(rng)};
  return f;
}

// O(N^2) n-d DFT straight from the definition.
std::vector<cplx> naive_dft(const SampledFunction& f, int sign) {
  const auto shape = f.shape();
  std::vector<cplx> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    auto kk = f.unflatten(k);
    cplx acc = 0;
    for (std::size_t m = 0; m < f.size(); ++m) {
      auto mm = f.unflatten(m);
      double phase = 0;
      for (std::size_t d = 0; d < shape.size(); ++d) phase += double(kk[d] * mm[d]) / double(shape[d]);
      acc += f[m] * std::polar(1.0, sign * 2 * std::numbers::pi * phase);
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST(Axis, CoordinatesAndNearest) {
  Axis a{1.0, 2.0, 8};
  EXPECT_DOUBLE_EQ(a.spacing(), 0.5);
  EXPECT_DOUBLE_EQ(a.coord(0), -1.0);
  EXPECT_DOUBLE_EQ(a.coord(7), 2.5);
  EXPECT_EQ(a.nearest(0.26), 3u);
  EXPECT_EQ(a.nearest(-50), 0u);
  EXPECT_EQ(a.nearest(50), 7u);
  Axis f = frequency_axis(a);
  EXPECT_DOUBLE_EQ(f.spacing(), 0.25);
  EXPECT_DOUBLE_EQ(f.center, 0.0);
}

TEST(Sampled, RejectsBadGrids) {
  EXPECT_THROW(SampledFunction({}, {}), std::invalid_argument);
  EXPECT_THROW(SampledFunction({Axis{0, 1, 3}}, std::vector<cplx>(3)), std::invalid_argument);
  EXPECT_THROW(SampledFunction({Axis{0, 0, 4}}, std::vector<cplx>(4)), std::invalid_argument);
  EXPECT_THROW(SampledFunction({Axis{0, 1, 4}}, std::vector<cplx>(5)), std::invalid_argument);
  EXPECT_THROW(SampledFunction({Axis{0, 1, 2}}, {cplx(NAN, 0), 1.0}), std::invalid_argument);
  std::vector<Axis> four(4, Axis{0, 1, 2});
  EXPECT_THROW(SampledFunction::zeros(four), std::invalid_argument);
}

TEST(Sampled, IndexingRoundTrip) {
  auto f = SampledFunction::zeros({Axis{0, 1, 4}, Axis{0, 1, 8}, Axis{0, 1, 2}});
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto idx = f.unflatten(i);
    EXPECT_EQ(f.flatten(idx), i);
  }
  EXPECT_EQ(f.unflatten(1)[2], 1u);  // last axis fastest
}

TEST(Sampled, Norms) {
  // Values 1, -2, 0, 3i on cells of width 0.5.
  SampledFunction f({Axis{0, 1, 4}}, {1.0, -2.0, 0.0, cplx(0, 3)});
  EXPECT_NEAR(f.lp_norm(1), 0.5 * 6, 1e-15);
  EXPECT_NEAR(f.lp_norm(2), std::sqrt(0.5 * 14), 1e-15);
  EXPECT_NEAR(f.lp_norm(INFINITY), 3, 1e-15);
  EXPECT_NEAR(f.sup_norm(), 3, 1e-15);
  EXPECT_NEAR(f.support_measure(), 1.5, 1e-15);
}

TEST(Binary, RoundTripIsBitExact) {
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<Axis> axes;
    for (std::size_t d = 0; d < n; ++d) axes.push_back(Axis{0.1 * d, 1.0 + d, std::size_t(4) << d});
    auto f = random_function(axes, 7 + n);
    std::stringstream buf;
    write_binary(f, buf);
    EXPECT_EQ(buf.str().size(), 4 + 24 * n + 16 * f.size());
    auto g = read_binary(buf);
    EXPECT_EQ(g.axes(), f.axes());
    EXPECT_EQ(g.values(), f.values());
  }
}

TEST(Binary, LayoutIsLittleEndian) {
  SampledFunction f({Axis{0, 1, 2}}, {1.0, 2.0});
  std::stringstream buf;
  write_binary(f, buf);
  std::string s = buf.str();
  EXPECT_EQ(s[0], 1);
  EXPECT_EQ(s[1], 0);
  EXPECT_EQ(static_cast<unsigned char>(s[4 + 16]), 2u);  // low byte of the u64 count
}

TEST(Binary, RejectsCorruptStreams) {
  auto f = random_function({Axis{0, 1, 8}}, 1);
  std::stringstream buf;
  write_binary(f, buf);
  std::string s = buf.str();
  {
    std::stringstream t(s.substr(0, s.size() - 5));
    EXPECT_THROW(read_binary(t), std::runtime_error);
  }
  {
    std::string bad = s;
    bad[0] = 9;
    std::stringstream t(bad);
    EXPECT_THROW(read_binary(t), std::runtime_error);
  }
  {
    std::string bad = s;
    bad[4 + 16] = 3;  // count not a power of two
    std::stringstream t(bad);
    EXPECT_THROW(read_binary(t), std::runtime_error);
  }
}

TEST(Csv, HeaderAndRows) {
  SampledFunction f({Axis{0, 1, 2}, Axis{0, 1, 2}}, {1.0, 2.0, 3.0, cplx(0, 4)});
  std::ostringstream out;
  write_csv(f, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "i0,i1,x0,x1,re,im");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Fft, MatchesNaiveDft) {
  for (auto axes : {std::vector<Axis>{Axis{0, 1, 16}}, std::vector<Axis>{Axis{0, 1, 4}, Axis{0, 1, 8}},
                    std::vector<Axis>{Axis{0, 1, 2}, Axis{0, 1, 4}, Axis{0, 1, 4}}}) {
    auto f = random_function(axes, 3);
    for (int sign : {-1, 1}) {
      std::vector<cplx> data = f.values();
      auto shape = f.shape();
      fft::transform(data, shape, sign);
      auto ref = naive_dft(f, sign);
      for (std::size_t i = 0; i < data.size(); ++i) EXPECT_LT(std::abs(data[i] - ref[i]), 1e-12);
    }
  }
}

TEST(Fft, Frequencies) {
  Axis a{0, 4, 8};
  EXPECT_DOUBLE_EQ(fft::frequency(a, 0), 0);
  EXPECT_DOUBLE_EQ(fft::frequency(a, 3), 3.0 / 8);
  EXPECT_DOUBLE_EQ(fft::frequency(a, 4), -4.0 / 8);
  EXPECT_DOUBLE_EQ(fft::frequency(a, 7), -1.0 / 8);
}

TEST(Fft, GaussianTransform) {
  // exp(-pi x^2) is its own transform; the grid phase is exp(2 pi i L xi).
  Axis a{0, 8, 256};
  auto f = SampledFunction::sample({a}, [](std::span<const double> x) { return cplx(std::exp(-std::numbers::pi * x[0] * x[0])); });
  auto hat = fft::continuous_transform(f);
  for (std::size_t k = 0; k < a.count; ++k) {
    double xi = fft::frequency(a, k);
    EXPECT_NEAR(std::abs(hat[k]), std::exp(-std::numbers::pi * xi * xi), 1e-12);
  }
}

TEST(Fft, IdentityDiagonalIsIdentity) {
  auto f = random_function({Axis{0, 1, 8}, Axis{0, 2, 16}}, 11);
  auto g = fft::apply_diagonal(f, [](std::size_t, std::span<const double>) { return cplx(1.0); });
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(g[i] - f[i]), 1e-13);
}

TEST(Random, StreamsAreDeterministicAndDistinct) {
  auto a = random::stream(5, 1), b = random::stream(5, 1), c = random::stream(5, 2), d = random::stream(6, 1);
  auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

// ---------------------------------------------------------------- properties

TEST(Property, Parseval) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<Axis> axes{Axis{0, 1.5, std::size_t(2) << (seed % 5)}};
    if (seed % 2) axes.push_back(Axis{0, 1, 8});
    auto f = random_function(axes, seed);
    auto hat = fft::continuous_transform(f);
    double dual_cell = 1;
    for (const auto& ax : axes) dual_cell *= frequency_axis(ax).spacing();
    double e = 0;
    for (const auto& z : hat) e += std::norm(z);
    EXPECT_NEAR(std::sqrt(e * dual_cell), f.lp_norm(2), 1e-12 * f.lp_norm(2));
  }
}

TEST(Property, ForwardInverseRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto f = random_function({Axis{0, 1, std::size_t(4) << (seed % 4)}, Axis{0, 1, 4}}, seed);
    std::vector<cplx> data = f.values();
    auto shape = f.shape();
    fft::transform(data, shape, -1);
    fft::transform(data, shape, +1);
    for (std::size_t i = 0; i < data.size(); ++i) EXPECT_LT(std::abs(data[i] / double(f.size()) - f[i]), 1e-13);
  }
}

TEST(Property, BandLimitedIndependentOfResolution) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<Axis> coarse{Axis{0, 4, 32}, Axis{0, 2, 16}};
    std::vector<Axis> fine{Axis{0, 4, 64}, Axis{0, 2, 32}};
    auto a = random::band_limited(coarse, 3, seed);
    auto b = random::band_limited(fine, 3, seed);
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto idx = a.unflatten(i);
      std::vector<std::size_t> j{2 * idx[0], 2 * idx[1]};
      EXPECT_LT(std::abs(a[i] - b[b.flatten(j)]), 1e-12 * (1 + std::abs(a[i])));
    }
  }
}

TEST(Property, BandLimitedRealValued) {
  auto f = random::band_limited({Axis{0, 2, 32}}, 5, 3, true);
  for (const auto& z : f.values()) EXPECT_LT(std::abs(z.imag()), 1e-12 * (1 + std::abs(z)));
}

TEST(Property, BandLimitedSpectrumIsBounded) {
  Axis a{0, 4, 64};
  auto f = random::band_limited({a}, 4, 9);
  auto hat = fft::continuous_transform(f);
  double total = 0, outside = 0;
  for (std::size_t k = 0; k < a.count; ++k) {
    total += std::norm(hat[k]);
    if (std::abs(fft::frequency(a, k)) > 4.0 / (2 * a.half_width) + 1e-12) outside += std::norm(hat[k]);
  }
  EXPECT_LT(outside, 1e-24 * total);
}
