#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlab/grid.hpp"
#include "mlab/weights.hpp"

namespace mlab::multiplier {

enum class Direction { Forward, Inverse };

// DFT, multiply by prod (1 + 4 pi^2 xi_i^2)^{+-z_i/2} (principal branch), inverse DFT.
SampledFunction gamma_apply(const SampledFunction& f, const std::vector<cplx>& order,
                            Direction dir = Direction::Forward);

// eta = 1 on [-1,1], 0 off (-2,2), with the exp(-1/u) ramp in between.
double eta(double xi);

struct DyadicRange {
  int j_min = 0, j_max = -1;
  bool empty() const { return j_max < j_min; }
  bool contains(int j) const { return j >= j_min && j <= j_max; }
};

class LittlewoodPaleyFamily {
 public:
  explicit LittlewoodPaleyFamily(int points_per_octave = 32);

  // psi^(xi) = eta(xi) - eta(2 xi), supported in 1/2 <= |xi| <= 2.
  static double psi(double xi);
  // psi^(xi/2) + psi^(xi) + psi^(2 xi), equal to 1 on the support of psi^.
  static double psi_b(double xi);
  static double psi_tensor(std::span<const double> xi);
  static double psi_b_tensor(std::span<const double> xi);

  int points_per_octave() const { return ppo_; }
  // (xi, psi^(xi)) on a log-spaced grid over [1/2, 2], and psi_b over [1/4, 4].
  const std::vector<std::pair<double, double>>& psi_samples() const { return psi_; }
  const std::vector<std::pair<double, double>>& psi_b_samples() const { return psi_b_; }

  // Dyadic j whose psi_b(2^{-j} .) is resolved by a frequency axis:
  // j_min = ceil(2 + log2 spacing), j_max = floor(log2 nyquist) - 2.
  static DyadicRange resolvable(const Axis& frequency);

 private:
  int ppo_;
  std::vector<std::pair<double, double>> psi_, psi_b_;
};

LittlewoodPaleyFamily build_lp_family(int points_per_octave);

class MultiplierSymbol {
 public:
  using Fn = std::function<cplx(std::span<const double>)>;

  // `frequency_axes` describes where the symbol is meaningful; it sets the resolvable j.
  static MultiplierSymbol analytic(std::vector<Axis> frequency_axes, Fn fn, std::vector<double> s, double p,
                                   std::string name = "analytic");
  // Samples on a frequency grid, read by multilinear interpolation; zero off the grid.
  static MultiplierSymbol sampled(SampledFunction samples, std::vector<double> s, double p,
                                  std::string name = "sampled");

  std::size_t dim() const { return axes_.size(); }
  const std::vector<Axis>& frequency_axes() const { return axes_; }
  const std::vector<double>& s() const { return s_; }
  int d() const;
  double p() const { return p_; }
  const std::string& name() const { return name_; }

  cplx operator()(std::span<const double> xi) const;

  // xi -> sigma(2^{a_1} xi_1, ..., 2^{a_n} xi_n).
  MultiplierSymbol dilated(const std::vector<int>& a) const;
  MultiplierSymbol scaled(cplx c) const;

  // j with 2^j [1/2, 2] inside the frequency axes and one grid step clear of 0:
  // ceil(log2 spacing) + 1 <= j <= floor(log2 nyquist) - 1.
  std::vector<DyadicRange> resolvable() const;

 private:
  std::vector<Axis> axes_;
  Fn fn_;
  std::vector<int> shift_;
  cplx scale_{1.0, 0.0};
  std::vector<double> s_;
  double p_ = 2;
  std::string name_;
};

struct SymbolParams {
  cplx c{1.0, 0.0};
  std::vector<double> shift;  // modulation: sigma = exp(-2 pi i shift . xi)
  std::vector<double> tau;    // marcinkiewicz: prod |xi_i|^{i tau_i}
  std::uint64_t seed = 1;     // random-band-limited
  int modes = 2;
};

// constant, modulation, half-space, random-band-limited, bump-product, marcinkiewicz.
const std::vector<std::string>& catalog_names();
// Frequency axes for a symbol applied on `spatial`: one octave wider on both ends, so
// the localized pieces cover every nonzero DFT frequency of the grid.
std::vector<Axis> symbol_axes_for(const std::vector<Axis>& spatial);
MultiplierSymbol catalog_symbol(const std::string& name, std::vector<Axis> frequency_axes,
                                std::vector<double> s, double p, const SymbolParams& params = {});

// Grid for the localized pieces: the variable of Psi^ ranges over [-8, 8]^n, 128 points per axis.
std::vector<Axis> default_piece_axes(std::size_t n);

// xi -> Psi^(xi) sigma(2^{j_1} xi_1, ..., 2^{j_n} xi_n) on the piece grid.
SampledFunction localized_piece(const MultiplierSymbol& sigma, const std::vector<int>& j,
                                const std::vector<Axis>& piece_axes);

// phi(s_1, d), phi(s_1, s_1 d), and phi(s_1, (1-s_1)d + delta).
weights::WeightFunction k_weight(const MultiplierSymbol& sigma);
weights::WeightFunction k_tilde_weight(const MultiplierSymbol& sigma);
weights::WeightFunction k_delta_weight(const MultiplierSymbol& sigma, double delta);

struct KReport {
  double K = 0;
  std::vector<int> argmax;
  std::size_t pieces = 0;
};

// max over resolvable j of lorentz_norm(gamma_apply(localized_piece(sigma, j), s), w).
KReport marcinkiewicz_constant(const MultiplierSymbol& sigma, const weights::WeightFunction& w,
                               const std::vector<Axis>& piece_axes);
KReport marcinkiewicz_constant(const MultiplierSymbol& sigma, const weights::WeightFunction& w);

SampledFunction apply_multiplier(const MultiplierSymbol& sigma, const SampledFunction& f);

struct NormEstimate {
  double estimate = 0;  // lower bound on ||T_sigma||_{p -> p}
  double max_symbol = 0;
  bool from_probe = false;
};

// Random band-limited f (modes up to max_mode) plus single-mode probes at the
// largest |sigma| bins of the grid.
NormEstimate lp_operator_norm_estimate(const MultiplierSymbol& sigma, const std::vector<Axis>& axes, double p,
                                       std::size_t battery, std::uint64_t seed, int max_mode = 4,
                                       int probes = 8);

enum class Variant { Psi, PsiB };

// Frequency multiplication by psi^(2^{-j} xi_k) (or psi_b) along axis k.
SampledFunction littlewood_paley_apply(const SampledFunction& f, int j, std::size_t axis, Variant v);

// Smallest multiple of 1/8 in (1/s_1, 2) when s_1 > 1/2, else 2/s_1.
double default_q(double s1);

struct PointwiseReport {
  double envelope = 0;
  double k_tilde = 0;
  double q = 0;
  std::vector<int> argmax;
  std::size_t pieces = 0;
};

// sup over resolvable j and grid points of |Delta_j^psi T f| / (K~ M_{L^q}(|Delta_j^{psi_b} f|)),
// skipping points where the right side is below 1e-8 of its global maximum.
PointwiseReport pointwise_estimate_check(const MultiplierSymbol& sigma, const SampledFunction& f, double q);

struct GrowthReport {
  std::vector<double> t, ratio;
  double degree = 0;
  bool pass = false;
};

// lorentz_norm(Gamma(i t, ..., i t) f, w) / lorentz_norm(f, w); degree is the slope
// of log ratio against log t over t >= 1.
GrowthReport imaginary_order_growth_check(const SampledFunction& f, const std::vector<double>& t_grid,
                                          const weights::WeightFunction& w);

// max over a battery of lorentz_norm(T f, w) / lorentz_norm(f, w).
double lorentz_growth_envelope(const MultiplierSymbol& sigma, const std::vector<Axis>& axes,
                               const weights::WeightFunction& w, std::size_t battery, std::uint64_t seed,
                               int max_mode = 4);

}  // namespace mlab::multiplier
