#include "mlab/weights.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mlab/errors.hpp"
#include "numerics.hpp"

namespace mlab::detail {

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y, double* rms) {
  const auto m = static_cast<Eigen::Index>(y.size());
  const auto n = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd x(m, n);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs(i) = y[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j)
      x(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd b = x.colPivHouseholderQr().solve(rhs);
  if (rms) *rms = m > 0 ? std::sqrt((x * b - rhs).squaredNorm() / static_cast<double>(m)) : 0.0;
  return {b.data(), b.data() + n};
}

}  // namespace mlab::detail

namespace mlab::weights {

using detail::kLn10;

namespace {

void check_s(double s) {
  if (!(s > 0 && s < 1)) throw precondition_error("weight parameter s must lie in (0,1)");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

WeightFunction WeightFunction::phi(double s, double beta) {
  check_s(s);
  WeightFunction w;
  w.kind_ = Kind::Phi;
  w.s_ = s;
  w.beta_ = beta;
  return w;
}

WeightFunction WeightFunction::omega(double s, double beta) {
  check_s(s);
  WeightFunction w;
  w.kind_ = Kind::Omega;
  w.s_ = s;
  w.beta_ = beta;
  return w;
}

WeightFunction WeightFunction::custom(ExprPtr expr) {
  if (!expr) throw std::invalid_argument("null expression");
  WeightFunction w;
  w.kind_ = Kind::Custom;
  w.s_ = w.beta_ = std::nan("");
  w.expr_ = std::move(expr);
  return w;
}

WeightFunction WeightFunction::parse(std::string_view text) { return custom(parse_weight(text)); }

WeightFunction WeightFunction::callable(LogFn log_fn, std::string label) {
  WeightFunction w;
  w.kind_ = Kind::Custom;
  w.s_ = w.beta_ = std::nan("");
  w.fn_ = std::make_shared<const LogFn>(std::move(log_fn));
  w.label_ = std::move(label);
  return w;
}

std::string WeightFunction::describe() const {
  switch (kind_) {
    case Kind::Phi:
      return "phi(" + fmt(s_) + "," + fmt(beta_) + ")";
    case Kind::Omega:
      return "omega(" + fmt(s_) + "," + fmt(beta_) + ")";
    case Kind::Custom:
      return expr_ ? to_string(*expr_) : label_;
  }
  return {};
}

double WeightFunction::log_at(double log_t) const {
  switch (kind_) {
    case Kind::Phi: {
      double v = s_ * log_t;
      if (beta_ != 0) v += beta_ * detail::loglog_e_plus_exp(-log_t);
      return v;
    }
    case Kind::Omega: {
      double v = s_ * log_t;
      if (beta_ != 0) v += beta_ * detail::loglog_e_plus_exp(log_t);
      return v;
    }
    case Kind::Custom:
      return expr_ ? log_eval(*expr_, log_t) : (*fn_)(log_t);
  }
  return std::nan("");
}

double WeightFunction::operator()(double t) const {
  if (!(t >= 1e-300 && t <= 1e300)) throw std::range_error("weight argument outside [1e-300, 1e300]");
  double v = std::exp(log_at(std::log(t)));
  if (!std::isfinite(v) || v <= 0) throw std::range_error("weight value not representable");
  return v;
}

double eval_weight(const WeightFunction& w, double t) { return w(t); }

double concave_majorant(const WeightFunction& w, double t) {
  if (!(t > 0)) throw std::domain_error("concave_majorant needs t > 0");
  double lt = std::log(t);
  double best = detail::kInf;
  for (double ls : detail::log_lattice(lt - 8 * kLn10, lt + 8 * kLn10, 64)) {
    double v = detail::logaddexp(0.0, lt - ls) + w.log_at(ls);
    if (v < best) best = v;
  }
  return std::exp(best);
}

double log_dilation_function(const WeightFunction& w, double log_t) {
  double lo = std::min(0.0, -log_t) - 8 * kLn10;
  double hi = std::max(0.0, -log_t) + 8 * kLn10;
  double best = -detail::kInf;
  for (double ls : detail::log_lattice(lo, hi, 64)) {
    double v = w.log_at(ls + log_t) - w.log_at(ls);
    if (std::isnan(v)) return v;
    if (v > best) best = v;
  }
  return best;
}

double dilation_function(const WeightFunction& w, double t) {
  if (!(t > 0)) throw std::domain_error("dilation_function needs t > 0");
  return std::exp(log_dilation_function(w, std::log(t)));
}

namespace {

double index_slope(const WeightFunction& w, double log10_lo, double log10_hi) {
  std::vector<double> lt, ll, one, y;
  for (int k = 0; k <= 64; ++k) {
    double l10 = log10_lo + (log10_hi - log10_lo) * k / 64.0;
    double l = l10 * kLn10;
    double m = log_dilation_function(w, l);
    if (!std::isfinite(m)) throw std::domain_error("index undefined: dilation function not finite");
    lt.push_back(l);
    // log log(e + t + 1/t)
    ll.push_back(std::log(detail::logaddexp(1.0, detail::logaddexp(l, -l))));
    one.push_back(1.0);
    y.push_back(m);
  }
  return detail::least_squares({lt, ll, one}, y)[0];
}

}  // namespace

Indices indices(const WeightFunction& w) {
  Indices r{index_slope(w, -12, -4), index_slope(w, 4, 12)};
  if (r.gamma > r.delta) r.gamma = r.delta = 0.5 * (r.gamma + r.delta);
  return r;
}

WeightFunction dual_weight(const WeightFunction& w) {
  switch (w.kind()) {
    case Kind::Phi:
      return WeightFunction::phi(1 - w.s(), -w.beta());
    case Kind::Omega:
      return WeightFunction::omega(1 - w.s(), -w.beta());
    case Kind::Custom:
      break;
  }
  if (w.expr()) return WeightFunction::custom(make_prod({make_var(), make_recip(w.expr())}));
  return WeightFunction::callable([w](double l) { return l - w.log_at(l); },
                                  "t/(" + w.describe() + ")");
}

WeightFunction reflect_weight(const WeightFunction& w) {
  switch (w.kind()) {
    case Kind::Phi:
      return WeightFunction::omega(1 - w.s(), w.beta());
    case Kind::Omega:
      return WeightFunction::phi(1 - w.s(), w.beta());
    case Kind::Custom:
      break;
  }
  if (w.expr()) return WeightFunction::custom(make_prod({make_var(), substitute_recip(w.expr())}));
  return WeightFunction::callable([w](double l) { return l + w.log_at(-l); },
                                  "t*(" + w.describe() + ")(1/t)");
}

nlohmann::json to_json(const WeightFunction& w) {
  switch (w.kind()) {
    case Kind::Phi:
      return {{"kind", "phi"}, {"s", w.s()}, {"beta", w.beta()}};
    case Kind::Omega:
      return {{"kind", "omega"}, {"s", w.s()}, {"beta", w.beta()}};
    case Kind::Custom:
      if (!w.expr()) throw std::logic_error("callable weights are not serializable");
      return {{"kind", "custom"}, {"expr", to_string(*w.expr())}};
  }
  return {};
}

WeightFunction weight_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "phi") return WeightFunction::phi(j.at("s").get<double>(), j.at("beta").get<double>());
  if (kind == "omega")
    return WeightFunction::omega(j.at("s").get<double>(), j.at("beta").get<double>());
  if (kind == "custom") return WeightFunction::parse(j.at("expr").get<std::string>());
  throw std::invalid_argument("unknown weight kind '" + kind + "'");
}

}  // namespace mlab::weights
