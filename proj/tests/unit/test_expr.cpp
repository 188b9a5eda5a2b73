#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "mlab/errors.hpp"
#include "mlab/expr.hpp"

using namespace mlab::weights;

TEST(Parse, SinglePower) {
  auto e = parse_weight("t^0.5");
  ASSERT_EQ(e->op, Op::Pow);
  EXPECT_EQ(e->value, 0.5);
  EXPECT_EQ(e->kids.at(0)->op, Op::Var);
}

TEST(Parse, ProductOfPowerAndLog) {
  auto e = parse_weight("t^0.5 * log(e + 1/t)^2");
  auto want = make_prod({make_pow(make_var(), 0.5), make_pow(make_log(make_sum({make_const(std::exp(1.0)),
                                                                                   make_recip(make_var())})),
                                                                 2.0)});
  EXPECT_TRUE(structurally_equal(*e, *want)) << to_string(*e);
}

TEST(Parse, IncompletePowerReportsOffset) {
  try {
    parse_weight("t^");
    FAIL() << "no syntax error";
  } catch (const mlab::syntax_error& err) {
    EXPECT_EQ(err.offset(), 2u);
  }
}

TEST(Parse, OtherSyntaxErrors) {
  EXPECT_THROW(parse_weight(""), mlab::syntax_error);
  EXPECT_THROW(parse_weight("log(t"), mlab::syntax_error);
  EXPECT_THROW(parse_weight("t + "), mlab::syntax_error);
  EXPECT_THROW(parse_weight("t ^ x"), mlab::syntax_error);
  EXPECT_THROW(parse_weight("t t"), mlab::syntax_error);
}

TEST(Parse, RejectsNonpositiveAtProbes) {
  // log(t) < 0 at t = 1e-6
  EXPECT_THROW(parse_weight("log(t)"), std::domain_error);
  EXPECT_NO_THROW(parse_expr("log(t)"));
}

TEST(Eval, MatchesArithmetic) {
  auto e = parse_weight("t^0.5 * log(e + 1/t)^2 + 3");
  for (double t : {1e-9, 0.3, 1.0, 7.0, 1e12}) {
    double want = std::sqrt(t) * std::pow(std::log(std::exp(1.0) + 1 / t), 2) + 3;
    EXPECT_NEAR(std::exp(log_eval(*e, std::log(t))) / want, 1.0, 1e-13) << t;
  }
}

TEST(Eval, FarBeyondDoubleRange) {
  // t = e^-1000: t^0.5 log(e + 1/t) = e^-500 * ~1000
  auto e = parse_weight("t^0.5 * log(e + 1/t)");
  EXPECT_NEAR(log_eval(*e, -1000.0), -500 + std::log(1000.0), 1e-9);
}

// Random trees print and re-parse to the same structure.
ExprPtr random_tree(std::mt19937_64& g, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 1);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  switch (pick(g)) {
    case 0: return make_var();
    case 1: return make_const(std::round(u(g) * 100) / 100);
    case 2: return make_pow(random_tree(g, depth - 1), std::round((u(g) - 1.5) * 8) / 8);
    case 3: return make_log(make_sum({make_const(std::exp(1.0)), random_tree(g, depth - 1)}));
    case 4: return make_recip(random_tree(g, depth - 1));
    case 5: return make_prod({random_tree(g, depth - 1), random_tree(g, depth - 1)});
    default: return make_sum({random_tree(g, depth - 1), random_tree(g, depth - 1)});
  }
}

TEST(Property, PrintParseRoundTrip) {
  std::mt19937_64 g(7);
  for (int i = 0; i < 500; ++i) {
    auto e = random_tree(g, 4);
    std::string text = to_string(*e);
    auto back = parse_expr(text);
    ASSERT_TRUE(structurally_equal(*e, *back)) << text << " -> " << to_string(*back);
  }
}

TEST(Substitute, ReciprocalVariable) {
  auto e = parse_weight("t^0.3 * log(e + t)");
  auto r = substitute_recip(e);
  for (double lt : {-20.0, 0.0, 5.0}) EXPECT_NEAR(log_eval(*r, lt), log_eval(*e, -lt), 1e-12);
}
