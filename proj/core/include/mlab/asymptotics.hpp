#pragma once

#include <cstdint>
#include <vector>

#include "mlab/grid.hpp"
#include "mlab/rearrange.hpp"

namespace mlab::asymptotics {

// I(a) = int_{[1,inf)^k} prod u_i^{-alpha_i} 1[prod u_i^{r_i} > a] du.
// Sorted on construction so that (alpha_i - 1)/r_i is nondecreasing.
class IntegralSpec {
 public:
  IntegralSpec(std::vector<double> alpha, std::vector<double> r, double a);

  std::size_t k() const { return alpha_.size(); }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& r() const { return r_; }
  double a() const { return a_; }
  IntegralSpec with_threshold(double a) const;

  double ratio(std::size_t i) const { return (alpha_[i] - 1) / r_[i]; }
  // Number of i >= 2 whose ratio equals the first within 1e-12.
  int d_prime() const;
  // (1 - alpha_1)/r_1
  double exponent() const { return -ratio(0); }
  // prod 1/(alpha_i - 1), the value at a <= 1.
  double full_mass() const;

 private:
  std::vector<double> alpha_, r_;
  double a_;
};

double eval_integral(const IntegralSpec& spec, double rel_tol = 1e-10);
// log I(a), finite for thresholds where I(a) underflows.
double eval_log_integral(const IntegralSpec& spec, double rel_tol = 1e-10);

struct McEstimate {
  double estimate;
  double stderr_;
};

McEstimate mc_oracle(const IntegralSpec& spec, std::uint64_t samples, std::uint64_t seed);

struct FitResult {
  double exponent = 0;
  double log_power = 0;
  double c_low = 0;
  double c_high = 0;
  double residual = 0;
};

// Least squares log I = e log a + p log log(e + a) + c over a_grid, plus the
// envelope of I(a) / (a^{(1-alpha_1)/r_1} log^{d'}(e + a)).
FitResult fit_asymptotics(const IntegralSpec& spec, const std::vector<double>& a_grid,
                          double rel_tol = 1e-9);

// Regression of log y on (log x, log log(e + x), 1), as used by every tail fit.
FitResult fit_power_log(const std::vector<double>& x, const std::vector<double>& log_y);

enum class Boundary { Zero, Periodic };

// At each point: sup over centered rectangles with per-axis half-widths
// {0, 1, 2, 4, ...} cells of the average of |f|^q, to the power 1/q.
SampledFunction strong_maximal(const SampledFunction& f, double q, Boundary b = Boundary::Zero);
double strong_maximal_at(const SampledFunction& f, double q, std::size_t flat_index,
                         Boundary b = Boundary::Zero);
// Flat index of the grid point nearest to x.
std::size_t nearest_index(const SampledFunction& f, const std::vector<double>& x);

// Measure of {y outside [-1,1]^n : |g(y)| / prod (1+|y_i|)^{s_i} > a}, with g
// constant on each grid cell and the in-cell set measured exactly.
double superlevel_measure(const SampledFunction& g, const std::vector<double>& s, double a);

// Fits the superlevel measure as C a^{e} log^{p}(e + 1/a) over a_grid. The envelope is
// taken against a^{-1/s_1} log^{d}(e + 1/a). Requires strong_maximal(g, q)(0) = 1.
FitResult superlevel_measure_check(const SampledFunction& g, const std::vector<double>& s, int d,
                                   const std::vector<double>& a_grid, double q = 2.0);

// h(y) = g(x + 2^{-j} y) / prod (1+|y_i|)^{s_i} on the translated, dilated grid;
// lhs = sup_t h*(t) omega_{s_1, -s_1 d}(t), rhs = strong_maximal(g, q)(x).
rearrange::RatioReport weighted_rearrangement_check(const SampledFunction& g,
                                                    const std::vector<double>& s, int d,
                                                    const std::vector<int>& j,
                                                    std::size_t x_index, double q = 2.0);

struct CubeSupportReport {
  double marcinkiewicz = 0;  // ||h||_{M_omega}, omega = omega_{s_1, -s_1 d}
  double weak = 0;           // ||h||_{L^{r,inf}}
  double maximal = 0;        // M_{L^q} h (0)
  double c12 = 0, c23 = 0;   // observed ratios
  double bound12 = 0, bound23 = 0;
  bool pass = false;
};

CubeSupportReport cube_support_check(const SampledFunction& h, const std::vector<double>& s, int d,
                                     double r, double q);

}  // namespace mlab::asymptotics
