#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mlab/errors.hpp"
#include "mlab/fft.hpp"
#include "mlab/multiplier.hpp"
#include "mlab/random.hpp"
#include "mlab/rearrange.hpp"

using namespace mlab;
using namespace mlab::multiplier;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const SampledFunction& a, const SampledFunction& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// exp(2 pi i m x / (2L)) on the axis.
SampledFunction single_mode(const Axis& a, int m) {
  return SampledFunction::sample({a}, [&](std::span<const double> x) { return std::polar(1.0, 2 * kPi * m * x[0] / (2 * a.half_width)); });
}

}  // namespace

TEST(Eta, ShapeAndSymmetry) {
  EXPECT_EQ(eta(0.0), 1.0);
  EXPECT_EQ(eta(1.0), 1.0);
  EXPECT_EQ(eta(-2.0), 0.0);
  EXPECT_NEAR(eta(1.5), 0.5, 1e-15);
  double prev = 1;
  for (double x = 1.0; x <= 2.0; x += 1.0 / 64) {
    EXPECT_LE(eta(x), prev);
    EXPECT_DOUBLE_EQ(eta(x), eta(-x));
    prev = eta(x);
  }
}

TEST(LpFamily, SupportAndAbsorption) {
  for (double xi = 0.01; xi < 10; xi *= 1.01) {
    double p = LittlewoodPaleyFamily::psi(xi);
    if (xi < 0.5 || xi > 2) EXPECT_EQ(p, 0.0) << xi;
    EXPECT_NEAR(LittlewoodPaleyFamily::psi_b(xi) * p, p, 1e-15);
    EXPECT_DOUBLE_EQ(p, LittlewoodPaleyFamily::psi(-xi));
  }
  EXPECT_THROW(LittlewoodPaleyFamily(8), precondition_error);
  LittlewoodPaleyFamily fam(32);
  EXPECT_EQ(fam.psi_samples().size(), 65u);
}

TEST(LpFamily, PartitionOfUnity) {
  // sum_{j=-5}^{5} psi(2^{-j} xi) telescopes to eta(2^{-5} xi) - eta(2^{6} xi).
  for (double xi = 1.0 / 16; xi <= 16; xi *= 1.03) {
    double sum = 0;
    for (int j = -5; j <= 5; ++j) sum += LittlewoodPaleyFamily::psi(std::ldexp(xi, -j));
    EXPECT_NEAR(sum, 1.0, 1e-14) << xi;
  }
}

TEST(LpFamily, ResolvableRange) {
  Axis f = frequency_axis(Axis{0, 8, 256});  // spacing 1/16, nyquist 8
  auto r = LittlewoodPaleyFamily::resolvable(f);
  EXPECT_EQ(r.j_min, -2);
  EXPECT_EQ(r.j_max, 1);
}

TEST(Gamma, SingleModeFactor) {
  Axis a{0, 4, 64};
  for (int m : {0, 1, 5, -9}) {
    auto f = single_mode(a, m);
    double xi = m / (2 * a.half_width);
    cplx z{0.6, 1.3};
    auto g = gamma_apply(f, {z});
    cplx factor = std::exp(0.5 * z * std::log(1 + 4 * kPi * kPi * xi * xi));
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(g[i] - factor * f[i]), 1e-12);
  }
}

TEST(Gamma, Preconditions) {
  auto f = SampledFunction::zeros({Axis{0, 1, 8}});
  EXPECT_THROW(gamma_apply(f, {0.5, 0.5}), precondition_error);
}

TEST(Symbol, CatalogNames) {
  const auto& n = catalog_names();
  EXPECT_EQ(n.size(), 6u);
  auto axes = symbol_axes_for({Axis{0, 8, 64}});
  for (const auto& name : n) {
    auto sym = catalog_symbol(name, axes, {0.6}, 4.0 / 3);
    EXPECT_EQ(sym.name(), name);
    double xi[] = {0.7};
    EXPECT_TRUE(std::isfinite(std::abs(sym(xi))));
  }
  EXPECT_THROW(catalog_symbol("nope", axes, {0.6}, 2), precondition_error);
}

TEST(Symbol, DilationAndScaling) {
  auto axes = symbol_axes_for({Axis{0, 8, 64}, Axis{0, 8, 64}});
  SymbolParams prm;
  prm.tau = {0.7, -1.2};
  auto sym = catalog_symbol("marcinkiewicz", axes, {0.6, 0.6}, 2, prm);
  auto dil = sym.dilated({1, -2});
  auto sc = sym.scaled({2.0, -1.0});
  double xi[] = {0.3, 1.7}, xd[] = {0.6, 1.7 / 4};
  EXPECT_LT(std::abs(dil(xi) - sym(xd)), 1e-14);
  EXPECT_LT(std::abs(sc(xi) - cplx(2, -1) * sym(xi)), 1e-14);
  // prod |xi_i|^{i tau_i} is unimodular.
  EXPECT_NEAR(std::abs(sym(xi)), 1.0, 1e-14);
  EXPECT_EQ(sym.d(), 1);
}

TEST(Apply, ModulationTranslates) {
  Axis a{0, 4, 64};
  auto axes = symbol_axes_for({a});
  SymbolParams prm;
  prm.shift = {3 * a.spacing()};
  auto sym = catalog_symbol("modulation", axes, {0.5}, 2, prm);
  auto f = random::band_limited({a}, 6, 2);
  auto g = apply_multiplier(sym, f);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(g[(i + 3) % f.size()] - f[i]), 1e-12);
}

TEST(Apply, ConstantScales) {
  Axis a{0, 4, 32};
  SymbolParams prm;
  prm.c = {0.5, 2.0};
  auto sym = catalog_symbol("constant", symbol_axes_for({a}), {0.5}, 2, prm);
  auto f = random::band_limited({a, a}, 3, 4);
  auto sym2 = catalog_symbol("constant", symbol_axes_for({a, a}), {0.5, 0.5}, 2, prm);
  auto g = apply_multiplier(sym2, f);
  EXPECT_LT(max_diff(g, f.map([&](cplx z) { return prm.c * z; })), 1e-12);
}

TEST(Constant, ScalesWithSymbol) {
  auto axes = symbol_axes_for({Axis{0, 8, 64}});
  SymbolParams prm;
  prm.seed = 3;
  auto sym = catalog_symbol("random-band-limited", axes, {0.6}, 4.0 / 3, prm);
  auto w = k_weight(sym);
  auto a = marcinkiewicz_constant(sym, w);
  auto b = marcinkiewicz_constant(sym.scaled({2.5, -1.0}), w);
  EXPECT_GT(a.K, 0);
  EXPECT_NEAR(b.K, std::abs(cplx(2.5, -1)) * a.K, 1e-12 * b.K);
  EXPECT_GT(a.pieces, 0u);
}

TEST(Constant, WeightsFollowTheOrder) {
  auto sym = catalog_symbol("constant", symbol_axes_for({Axis{0, 8, 64}, Axis{0, 8, 64}}), {0.4, 0.4}, 2);
  EXPECT_EQ(sym.d(), 1);
  auto k = k_weight(sym), kt = k_tilde_weight(sym), kd = k_delta_weight(sym, 0.1);
  EXPECT_DOUBLE_EQ(k.s(), 0.4);
  EXPECT_DOUBLE_EQ(k.beta(), 1.0);
  EXPECT_DOUBLE_EQ(kt.beta(), 0.4);
  EXPECT_DOUBLE_EQ(kd.beta(), 0.6 + 0.1);
}

TEST(Pointwise, DefaultQ) {
  EXPECT_DOUBLE_EQ(default_q(0.6), 1.75);
  EXPECT_DOUBLE_EQ(default_q(0.9), 1.125);
  EXPECT_DOUBLE_EQ(default_q(0.4), 5.0);
  EXPECT_DOUBLE_EQ(default_q(0.5), 4.0);
}

TEST(Pointwise, RejectsSmallQ) {
  auto axes = symbol_axes_for({Axis{0, 8, 64}});
  auto sym = catalog_symbol("constant", axes, {0.6}, 2);
  auto f = random::band_limited({Axis{0, 8, 64}}, 4, 1);
  EXPECT_THROW(pointwise_estimate_check(sym, f, 1.5), precondition_error);
}

TEST(Growth, OrderZeroIsIdentity) {
  auto f = random::band_limited({Axis{0, 8, 128}}, 8, 6);
  auto r = imaginary_order_growth_check(f, {0.0, 1.0, 4.0}, weights::WeightFunction::phi(0.5, 1));
  ASSERT_EQ(r.ratio.size(), 3u);
  EXPECT_EQ(r.ratio[0], 1.0);
}

TEST(NormEstimate, ConstantSymbolOnL2) {
  Axis a{0, 8, 64};
  SymbolParams prm;
  prm.c = {0.0, 3.0};
  auto sym = catalog_symbol("constant", symbol_axes_for({a}), {0.6}, 2, prm);
  auto e = lp_operator_norm_estimate(sym, {a}, 2.0, 100, 1);
  EXPECT_NEAR(e.estimate, 3.0, 1e-12);
  EXPECT_NEAR(e.max_symbol, 3.0, 1e-12);
}

// ---------------------------------------------------------------- properties

TEST(Property, GammaForwardInverseRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Axis a{0, 4, 32};
    auto f = random::band_limited({a, a}, 5, seed);
    std::vector<cplx> z{{0.3 + 0.05 * seed, -1.0}, {0.8, 2.0}};
    auto back = gamma_apply(gamma_apply(f, z, Direction::Forward), z, Direction::Inverse);
    EXPECT_LT(max_diff(back, f), 1e-11);
  }
}

TEST(Property, GammaPositiveOrderSmooths) {
  // Inverse direction with real positive order has a multiplier bounded by 1.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto f = random::band_limited({Axis{0, 4, 64}}, 10, seed);
    auto g = gamma_apply(f, {cplx(0.7)}, Direction::Inverse);
    EXPECT_LE(g.lp_norm(2), f.lp_norm(2) * (1 + 1e-12));
  }
}

TEST(Property, LpPiecesAbsorb) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Axis a{0, 8, 256};
    auto f = random::band_limited({a}, 12, seed);
    for (int j = -2; j <= 1; ++j) {
      auto direct = littlewood_paley_apply(f, j, 0, Variant::Psi);
      auto via = littlewood_paley_apply(littlewood_paley_apply(f, j, 0, Variant::PsiB), j, 0, Variant::Psi);
      EXPECT_LT(max_diff(direct, via), 1e-12);
    }
  }
}

TEST(Property, PlancherelBound) {
  Axis a{0, 8, 64};
  auto axes = symbol_axes_for({a});
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SymbolParams prm;
    prm.seed = seed;
    prm.c = std::polar(0.5 + 0.2 * seed, 1.0 * seed);
    const auto& name = catalog_names()[seed % catalog_names().size()];
    auto sym = catalog_symbol(name, axes, {0.6}, 2, prm);
    auto e = lp_operator_norm_estimate(sym, {a}, 2.0, 100, seed);
    EXPECT_LE(e.estimate, e.max_symbol * (1 + 1e-9)) << name;
  }
}

TEST(Property, ConstantInvariantUnderDilation) {
  auto axes = symbol_axes_for({Axis{0, 8, 64}});
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SymbolParams prm;
    prm.tau = {0.5 + seed};
    auto sym = catalog_symbol("marcinkiewicz", axes, {0.6}, 4.0 / 3, prm);
    auto w = k_weight(sym);
    auto a = marcinkiewicz_constant(sym, w), b = marcinkiewicz_constant(sym.dilated({1}), w);
    EXPECT_GT(a.K, 0);
    // The dyadic supremum is blind to a shift of j.
    EXPECT_NEAR(b.K / a.K, 1.0, 1e-12);
  }
}
