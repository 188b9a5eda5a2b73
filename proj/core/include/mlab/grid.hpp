#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mlab {

using cplx = std::complex<double>;

// Uniform axis: points x_k = center - half_width + k * spacing, k = 0..count-1,
// spacing = 2 * half_width / count. count is a power of two.
struct Axis {
  double center = 0.0;
  double half_width = 1.0;
  std::size_t count = 2;

  double spacing() const { return 2.0 * half_width / static_cast<double>(count); }
  double coord(std::size_t k) const {
    return center - half_width + static_cast<double>(k) * spacing();
  }
  // Index of the point nearest to x (clamped).
  std::size_t nearest(double x) const;
  bool operator==(const Axis&) const = default;
};

// Frequency axis paired with a spatial axis under the DFT: spacing 1/(2L),
// half-width count/(4L), centered at 0.
Axis frequency_axis(const Axis& a);

// Complex samples on a tensor grid in dimension 1..3, row-major (last axis fastest).
class SampledFunction {
 public:
  SampledFunction() = default;
  SampledFunction(std::vector<Axis> axes, std::vector<cplx> values);

  using Fn = std::function<cplx(std::span<const double>)>;
  static SampledFunction sample(std::vector<Axis> axes, const Fn& f);
  static SampledFunction zeros(std::vector<Axis> axes);

  std::size_t dim() const { return axes_.size(); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t i) const { return axes_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& mutable_values() { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }

  double cell_measure() const;
  std::vector<std::size_t> shape() const;
  // Multi-index of a flat index.
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> idx) const;
  std::vector<double> coords(std::size_t flat) const;

  // cell_measure * sum |f|^p, to the power 1/p; p = inf gives the max.
  double lp_norm(double p) const;
  double sup_norm() const;
  double support_measure() const;

  // Same grid, values transformed pointwise.
  SampledFunction map(const std::function<cplx(cplx)>& g) const;

 private:
  std::vector<Axis> axes_;
  std::vector<cplx> values_;
};

bool same_grid(const SampledFunction& a, const SampledFunction& b);

// Binary layout (little-endian):
//   uint32 n; n x { f64 center, f64 half_width, u64 count }; prod(count) x { f64 re, f64 im }
void write_binary(const SampledFunction& f, std::ostream& out);
SampledFunction read_binary(std::istream& in);
void save_binary(const SampledFunction& f, const std::string& path);
SampledFunction load_binary(const std::string& path);

// CSV with header i0[,i1,i2],x0[,x1,x2],re,im
void write_csv(const SampledFunction& f, std::ostream& out);

}  // namespace mlab
