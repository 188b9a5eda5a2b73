#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "mlab/expr.hpp"

namespace mlab::weights {

enum class Kind { Phi, Omega, Custom };

// Positive weight on (0, inf). Built-in forms:
//   phi(s, b)   t^s log^b(e + 1/t)
//   omega(s, b) t^s log^b(e + t)
// Custom weights hold an expression tree or a callable returning log w at log t.
// All members are immutable after construction.
class WeightFunction {
 public:
  using LogFn = std::function<double(double)>;

  static WeightFunction phi(double s, double beta);
  static WeightFunction omega(double s, double beta);
  static WeightFunction custom(ExprPtr expr);
  static WeightFunction parse(std::string_view text);
  // Not serializable. `log_fn` maps log t to log w(t).
  static WeightFunction callable(LogFn log_fn, std::string label);

  Kind kind() const noexcept { return kind_; }
  double s() const noexcept { return s_; }
  double beta() const noexcept { return beta_; }
  const ExprPtr& expr() const noexcept { return expr_; }
  std::string describe() const;

  // log w at log t. No range check; usable for |log t| far beyond double range of t.
  double log_at(double log_t) const;
  // w(t); std::range_error outside [1e-300, 1e300] or on overflow.
  double operator()(double t) const;

 private:
  Kind kind_ = Kind::Custom;
  double s_ = 0, beta_ = 0;
  ExprPtr expr_;
  std::shared_ptr<const LogFn> fn_;
  std::string label_;
};

double eval_weight(const WeightFunction& w, double t);

// inf over s of (1 + t/s) w(s) on the lattice 10^(k/64) within [t 1e-8, t 1e8].
double concave_majorant(const WeightFunction& w, double t);

// sup over s of w(st)/w(s) on the lattice 10^(k/64) within
// [min(1, 1/t) 1e-8, max(1, 1/t) 1e8].
double dilation_function(const WeightFunction& w, double t);
double log_dilation_function(const WeightFunction& w, double log_t);

struct Indices {
  double gamma;
  double delta;
};

// Fits log m(t) = e log t + c1 log log(e + t + 1/t) + c0 on [1e-12, 1e-4] (gamma)
// and [1e4, 1e12] (delta); returns the two slopes.
Indices indices(const WeightFunction& w);

// t / w(t).
WeightFunction dual_weight(const WeightFunction& w);
// t w(1/t).
WeightFunction reflect_weight(const WeightFunction& w);

nlohmann::json to_json(const WeightFunction& w);
WeightFunction weight_from_json(const nlohmann::json& j);

}  // namespace mlab::weights
