#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "mlab/asymptotics.hpp"
#include "mlab/grid.hpp"
#include "mlab/rearrange.hpp"

namespace mlab::kernels {

// One-dimensional kernel of (I - d^2/dx^2)^{-s/2}, symbol (1 + 4 pi^2 xi^2)^{-s/2}.
class BesselKernel {
 public:
  // Tables are cached per order and shared.
  static std::shared_ptr<const BesselKernel> get(double s);
  explicit BesselKernel(double s);

  double s() const { return s_; }
  // G_s(x) ~ c0 |x|^{s-1} as x -> 0, c0 = sin(pi s/2) Gamma(1-s) / pi.
  double near_coefficient() const;
  // G_s(x) ~ C |x|^{(s-2)/2} e^{-c|x|} as |x| -> inf; c = 1.
  double decay_rate() const { return 1.0; }

  // Quadrature value; any x != 0.
  double log_value(double x) const;
  // Table interpolation in (log x, log G); x in (0, 3000].
  double log_value_fast(double log_x) const;
  // Log of the x > 0 where log G_s(x) = log_g; extrapolates past the table.
  double log_inverse(double log_g) const;
  // int_0^x G_s.
  double integral_to(double x) const;

  // Table points (x, G_s(x)) with x in [1e-8, 50].
  std::vector<std::pair<double, double>> table(int points_per_decade = 16) const;

 private:
  double s_;
  double lx0_, step_;
  std::vector<double> lg_;   // log G at lx0 + k step
  std::vector<double> dlg_;  // derivative in log x
};

// G_s(x) for |x| in [1e-8, 50]; precondition_error otherwise.
double bessel_eval(double s, double x);

void write_kernel_csv(double s, std::ostream& out, int points_per_decade = 16);

// Measure of {x in R^n : prod G_{s_i}(x_i) > lambda} from the layer-cake integral,
// fitted as lambda^e log^p(e + lambda). The envelope is taken against
// lambda^{-1/(1-s_1)} log^d(e + lambda).
struct KernelTailFit {
  asymptotics::FitResult fit;
  std::vector<double> lambda, measure;
};

double tensor_kernel_measure(const std::vector<double>& s, double lambda);
KernelTailFit tensor_kernel_distribution(const std::vector<double>& s, const std::vector<double>& lambda_grid);

// Rearrangement of the tensor kernel from exact cell averages on per-axis
// geometric cells [0, 1e-7], then 1e-7 .. 50 at `per_decade` cells per decade.
rearrange::RearrangementProfile tensor_kernel_profile(const std::vector<double>& s, int per_decade = 32);

struct LowerBoundReport {
  double inf_ratio = 0, sup_ratio = 0;
  double inf_refined = 0, sup_refined = 0;
  bool stable = false;
  bool pass = false;
};

// inf and sup over t_grid of (G x ... x G)*(t) / (t^{s_1-1} log^{(1-s_1)d}(e + 1/t)),
// at per_decade and 2 per_decade; stable when both agree within 15%.
LowerBoundReport rearrangement_lower_bound_check(const std::vector<double>& s, int d,
                                                 const std::vector<double>& t_grid, int per_decade = 32);

struct EmbeddingReport {
  double max_ratio = 0;    // max ||f||_inf / ||g||_Lambda
  double chain_max = 0;    // max ||f||_inf / (||G||_M ||g||_Lambda)
  double kernel_norm = 0;  // ||G||_M for phi(1-s_1, d(s_1-1))
  std::size_t cases = 0;
};

// f = Gamma(-s) g for `battery` band-limited g with modes up to max_mode.
EmbeddingReport embedding_ratio(const std::vector<double>& s, int d, std::size_t battery,
                                const std::vector<Axis>& axes, int max_mode, std::uint64_t seed);

struct NecessityReport {
  std::vector<double> log_t, log_r;
  double log_factor = 0;  // log r(t_min) - log r(t_max)
  bool monotone = false;
  bool diverges = false;
};

// log r(t) = log phi(s_1,(1-s_1)d)(t) - log phi(s_1, beta)(t) over log t values
// (decreasing). The grid is extended geometrically in log t while r is increasing and
// has not yet grown by 10, up to |log t| = 1e250.
NecessityReport necessity_divergence(double s1, int d, double beta, std::vector<double> log_t_grid);
// log t from log(1e-3) down to log(1e-15).
std::vector<double> default_necessity_grid();

}  // namespace mlab::kernels
