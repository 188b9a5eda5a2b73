#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace mlab::weights {

// Node kinds of the weight expression language.
enum class Op { Const, Var, Pow, Log, Recip, Prod, Sum };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op;
  double value = 0.0;  // constant value, or exponent for Pow
  std::vector<ExprPtr> kids;
};

ExprPtr make_const(double v);
ExprPtr make_var();
ExprPtr make_pow(ExprPtr base, double exponent);
ExprPtr make_log(ExprPtr inner);
ExprPtr make_recip(ExprPtr inner);
ExprPtr make_prod(std::vector<ExprPtr> kids);
ExprPtr make_sum(std::vector<ExprPtr> kids);

// Grammar:
//   expr   := term ('+' term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' signed-number)?
//   atom   := 't' | 'e' | number | 'log(' expr ')' | '(' expr ')'
// "a/b" reads as a * (1/b); a leading bare "1/" is dropped so "1/t" is recip(t).
// Throws syntax_error with the byte offset of the first bad token, and
// std::domain_error if the result is not positive and finite at t = 1e-6, 1, 1e6.
ExprPtr parse_weight(std::string_view text);

// Same grammar without the positivity probe.
ExprPtr parse_expr(std::string_view text);

// Prints text that parses back to a structurally identical tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Natural log of the expression value at t, computed without forming t itself.
// Returns NaN when the value is not positive.
double log_eval(const Expr& e, double log_t);

// Replaces the variable t by 1/t.
ExprPtr substitute_recip(const ExprPtr& e);

}  // namespace mlab::weights
