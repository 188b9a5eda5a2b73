#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mlab/grid.hpp"
#include "mlab/weights.hpp"

namespace mlab::rearrange {

using weights::WeightFunction;

// Nonincreasing step function f*: value v_k on [t_{k-1}, t_k), v_1 > v_2 > ... > 0,
// 0 = t_0 < t_1 < ... < t_m. Zero values are not stored; f* = 0 beyond t_m.
class RearrangementProfile {
 public:
  RearrangementProfile() = default;

  // |values| sorted and grouped; measures are integer counts times cell_measure,
  // so measure_above() equals the grid distribution function exactly.
  static RearrangementProfile from_grid(const std::vector<double>& magnitudes, double cell_measure);
  // Arbitrary (value, measure) pieces; values are grouped when equal.
  static RearrangementProfile from_pieces(std::vector<std::pair<double, double>> pieces);

  std::size_t steps() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& breaks() const { return breaks_; }
  double total_measure() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
  bool empty() const { return values_.empty(); }

  double at(double t) const;                // f*(t), right-continuous
  double measure_above(double tau) const;   // |{f* > tau}|
  double integral_to(double t) const;       // int_0^t f*
  double total_integral() const;

 private:
  std::vector<double> values_;
  std::vector<double> breaks_;
  std::vector<double> partial_;  // int_0^{t_k} f*
  void finish();
};

double distribution_function(const SampledFunction& f, double tau);
RearrangementProfile rearrangement(const SampledFunction& f);
double double_star(const RearrangementProfile& p, double t);

// sum_k w(t_k) (v_k - v_{k+1}); exact for the step profile. Warns when w(0+) > 0.
double lorentz_norm(const RearrangementProfile& p, const WeightFunction& w);
double lorentz_norm(const SampledFunction& f, const WeightFunction& w);

// sup_t w(t) f**(t) over breakpoints, a 64-per-decade lattice up to 1e8 * total
// measure, refined by golden-section search around the best candidate.
double marcinkiewicz_norm(const RearrangementProfile& p, const WeightFunction& w);
double marcinkiewicz_norm(const SampledFunction& f, const WeightFunction& w);

// sup_k t_k^{1/r} v_k.
double weak_norm(const RearrangementProfile& p, double r);
double weak_norm(const SampledFunction& f, double r);

// max_k v_k w(t_k): sup of f*(t) w(t) for nondecreasing w.
double sup_product(const RearrangementProfile& p, const WeightFunction& w);

struct RatioReport {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  double bound = 0;  // threshold the ratio is compared against, when there is one
  bool pass = false;
};

// lhs = int |fg|, rhs = ||f||_Lambda_w * ||g||_M_{t/w}.
RatioReport check_holder(const SampledFunction& f, const SampledFunction& g, const WeightFunction& w);

// ratio of int (f**)^p w(t)/t dt to int (f*)^p w(t)/t dt on (0, 1e6 * total measure];
// bound = sum_{k>=1} 2^{-kp} m_w(2^k). Requires delta_w < p.
RatioReport check_hardy(const SampledFunction& f, const WeightFunction& w, double p);
RatioReport check_hardy(const RearrangementProfile& prof, const WeightFunction& w, double p);
double hardy_constant(const WeightFunction& w, double p);

struct SunriseReport {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  double ratio_refined = 0;
  bool finite = false;
  bool stable = false;
  bool pass = false;
};

// lhs = int (f*(r) r^{b-a})*(y) phi_{a,g}(y) dy/y, rhs = int f*(r) phi_{b,g}(r) dr/r.
// For b > a the inner rearrangement is formed from `subcells` log-spaced samples per
// profile step and compared with 2 * subcells.
SunriseReport check_sunrise(const RearrangementProfile& p, double alpha, double beta, double gamma,
                            int subcells = 32);
SunriseReport check_sunrise(const SampledFunction& f, double alpha, double beta, double gamma,
                            int subcells = 32);

// |f^| sampled at the DFT frequencies as a function on the frequency grid.
SampledFunction fourier_magnitude(const SampledFunction& f);

// ||f^||_{Lambda_psi} / ||f||_{Lambda_w}, psi(t) = t w(1/t). Requires n = 1 and
// 1/2 < gamma_w <= delta_w < 1.
RatioReport hausdorff_young_lorentz(const SampledFunction& f, const WeightFunction& w);

}  // namespace mlab::rearrange
