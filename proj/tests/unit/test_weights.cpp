#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mlab/weights.hpp"

using namespace mlab::weights;

namespace {

const double E = std::exp(1.0);

WeightFunction min_t_one() {
  return WeightFunction::callable([](double lt) { return std::min(lt, 0.0); }, "min(t,1)");
}

std::vector<double> probe_grid(double lo10, double hi10, int per_decade) {
  std::vector<double> out;
  for (int k = 0; k <= (hi10 - lo10) * per_decade; ++k) out.push_back(std::pow(10.0, lo10 + double(k) / per_decade));
  return out;
}

}  // namespace

TEST(Eval, BaseForms) {
  EXPECT_DOUBLE_EQ(eval_weight(WeightFunction::phi(0.5, 0), 4.0), 2.0);
  EXPECT_NEAR(eval_weight(WeightFunction::omega(0.5, 1), 1.0), std::log(E + 1), 1e-14);
  EXPECT_NEAR(eval_weight(WeightFunction::omega(0.5, 1), 1.0), 1.31326, 1e-5);
  EXPECT_NEAR(eval_weight(WeightFunction::phi(0.5, 2), 1.0), std::pow(std::log(E + 1), 2), 1e-14);
  EXPECT_NEAR(eval_weight(WeightFunction::phi(0.5, 2), 1.0), 1.72466, 1e-5);
}

TEST(Eval, MatchesDirectFormula) {
  for (double s : {0.1, 0.5, 0.9})
    for (double b : {-2.0, 0.5, 3.0})
      for (double t : {1e-200, 1e-7, 0.2, 3.0, 1e9, 1e250}) {
        double phi = std::pow(t, s) * std::pow(std::log(E + 1 / t), b);
        double om = std::pow(t, s) * std::pow(std::log(E + t), b);
        EXPECT_NEAR(WeightFunction::phi(s, b)(t) / phi, 1.0, 1e-12);
        EXPECT_NEAR(WeightFunction::omega(s, b)(t) / om, 1.0, 1e-12);
      }
}

TEST(Eval, RangeError) {
  auto w = WeightFunction::phi(0.5, 1);
  EXPECT_THROW(w(1e-301), std::range_error);
  EXPECT_THROW(w(1e301), std::range_error);
  EXPECT_THROW(w(0.0), std::range_error);
}

TEST(Parse, CustomWeightMatchesBuiltin) {
  auto c = WeightFunction::parse("t^0.5 * log(e + 1/t)^2");
  auto p = WeightFunction::phi(0.5, 2);
  for (double t : {1e-10, 0.5, 1e10}) EXPECT_NEAR(c(t) / p(t), 1.0, 1e-12);
}

TEST(Majorant, LinearWeightIsItsOwnMajorant) {
  auto w = WeightFunction::parse("t");
  for (double t : probe_grid(-6, 6, 2)) EXPECT_NEAR(concave_majorant(w, t) / t, 1.0, 1e-6) << t;
}

// Holds for quasi-concave weights; phi(0.5, 1) is one.
TEST(Majorant, WithinFactorTwo) {
  for (const auto& w : {WeightFunction::phi(0.5, 1), WeightFunction::omega(0.5, 1)})
    for (double t : probe_grid(-6, 6, 1)) {
      double r = concave_majorant(w, t) / w(t);
      EXPECT_GE(r, 1.0 - 1e-12) << t;
      EXPECT_LE(r, 2.0 + 1e-12) << t;
    }
}

TEST(Majorant, MinOfTAndOne) {
  // min(t, 1) is already concave; the lattice edge costs a factor 1 + 1e-8.
  for (double t : {1e-3, 1.0, 1e6}) EXPECT_NEAR(concave_majorant(min_t_one(), t) / std::min(t, 1.0), 1.0, 2e-8);
}

TEST(Dilation, PowerIsHomogeneous) {
  auto w = WeightFunction::parse("t^0.3");
  for (double t : {1e-5, 0.1, 2.0, 1e7}) EXPECT_NEAR(dilation_function(w, t) / std::pow(t, 0.3), 1.0, 1e-12);
}

TEST(Dilation, MinOfTAndOneAtTwo) { EXPECT_NEAR(dilation_function(min_t_one(), 2.0), 2.0, 1e-12); }

TEST(Dilation, PhiBounds) {
  for (double s : {0.2, 0.6})
    for (double b : {0.0, 1.0, 2.5}) {
      auto w = WeightFunction::phi(s, b);
      for (double t : probe_grid(-8, 8, 1)) {
        double r = dilation_function(w, t) / w(t);
        EXPECT_GE(r, 1 / std::pow(std::log(E + 1), b) * (1 - 1e-12)) << s << ' ' << b << ' ' << t;
        EXPECT_LE(r, std::pow(2.0, b) * (1 + 1e-12)) << s << ' ' << b << ' ' << t;
      }
    }
}

TEST(Indices, PhiAndOmegaExamples) {
  auto a = indices(WeightFunction::phi(0.3, 5));
  EXPECT_NEAR(a.gamma, 0.3, 0.02);
  EXPECT_NEAR(a.delta, 0.3, 0.02);
  auto b = indices(WeightFunction::omega(0.7, -1));
  EXPECT_NEAR(b.gamma, 0.7, 0.02);
  EXPECT_NEAR(b.delta, 0.7, 0.02);
  auto c = indices(WeightFunction::parse("t"));
  EXPECT_NEAR(c.gamma, 1.0, 1e-9);
  EXPECT_NEAR(c.delta, 1.0, 1e-9);
}

TEST(Dual, Identities) {
  for (double s : {0.25, 0.6}) {
    auto d = dual_weight(WeightFunction::phi(s, 0));
    for (double t : {1e-8, 0.3, 5.0, 1e8}) EXPECT_NEAR(d(t) / std::pow(t, 1 - s), 1.0, 1e-12);
  }
  for (double s1 : {0.3, 0.5, 0.8})
    for (int dd : {1, 2}) {
      auto lhs = dual_weight(WeightFunction::phi(s1, (1 - s1) * dd));
      auto rhs = WeightFunction::phi(1 - s1, dd * (s1 - 1));
      for (double t : {1e-12, 1e-3, 1.0, 1e5}) EXPECT_NEAR(lhs(t) / rhs(t), 1.0, 1e-12);
    }
  auto w = WeightFunction::parse("t^0.4 * log(e + t)^2 + 1");
  auto dd = dual_weight(dual_weight(w));
  for (double t : {1e-9, 1.0, 1e9}) EXPECT_NEAR(dd(t) / w(t), 1.0, 1e-12);
}

TEST(Json, RoundTrip) {
  for (const auto& w : {WeightFunction::phi(0.3, -1), WeightFunction::omega(0.7, 2),
                        WeightFunction::parse("t^0.5 * log(e + 1/t)")}) {
    auto back = weight_from_json(to_json(w));
    for (double t : {1e-6, 1.0, 1e6}) EXPECT_DOUBLE_EQ(back(t), w(t));
  }
  EXPECT_THROW(weight_from_json(nlohmann::json{{"kind", "nope"}}), std::invalid_argument);
}

// ---------------------------------------------------------------- properties

TEST(Property, Submultiplicative) {
  auto grid = probe_grid(-6, 6, 2);
  for (double s : {0.1, 0.5, 0.9})
    for (double b : {-2.0, 0.0, 1.5, 3.0})
      for (const auto& w : {WeightFunction::phi(s, b), WeightFunction::omega(s, b)})
        for (double a : grid) {
          double m = dilation_function(w, a);
          for (double c : grid) EXPECT_LE(w(a * c), m * w(c) * (1 + 1e-12)) << w.describe();
        }
}

// phi(s, b) and omega(s, b) are quasi-concave when the log factor cannot reverse the
// monotonicity of t^s or of t^{s-1}. Outside that range they are only equivalent to
// quasi-concave functions.
TEST(Property, QuasiConcave) {
  auto grid = probe_grid(-8, 8, 2);
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double frac : {0.0, 0.5, 1.0}) {
      double b = frac * 3.0 * std::min(s, 1 - s);
      for (const auto& w : {WeightFunction::phi(s, b), WeightFunction::omega(s, b)})
        for (double x : grid)
          for (double y : grid) EXPECT_LE(w(x), std::max(1.0, x / y) * w(y) * (1 + 1e-12)) << w.describe();
    }
}

TEST(Property, IndicesOnGrid) {
  for (int si = 1; si <= 9; ++si)
    for (int b = -2; b <= 3; ++b) {
      double s = si / 10.0;
      for (const auto& w : {WeightFunction::phi(s, b), WeightFunction::omega(s, b)}) {
        auto ix = indices(w);
        EXPECT_NEAR(ix.gamma, s, 0.02) << w.describe();
        EXPECT_NEAR(ix.delta, s, 0.02) << w.describe();
        EXPECT_LE(ix.gamma, ix.delta + 1e-6);
      }
    }
}

TEST(Property, MajorantIsConcaveAlongGrid) {
  for (const auto& w : {WeightFunction::phi(0.5, 2), WeightFunction::omega(0.3, 1), WeightFunction::phi(0.8, -1)}) {
    auto grid = probe_grid(-4, 4, 4);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      double a = grid[i - 1], b = grid[i], c = grid[i + 1];
      double fa = concave_majorant(w, a), fb = concave_majorant(w, b), fc = concave_majorant(w, c);
      double chord = fa + (fc - fa) * (b - a) / (c - a);
      EXPECT_GE(fb, chord * (1 - 1e-9)) << w.describe() << " t=" << b;
    }
  }
}
