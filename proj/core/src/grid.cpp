#include "mlab/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace mlab {

std::size_t Axis::nearest(double x) const {
  double k = std::round((x - (center - half_width)) / spacing());
  if (k < 0) return 0;
  if (k > static_cast<double>(count - 1)) return count - 1;
  return static_cast<std::size_t>(k);
}

Axis frequency_axis(const Axis& a) {
  return Axis{0.0, static_cast<double>(a.count) / (4.0 * a.half_width), a.count};
}

SampledFunction::SampledFunction(std::vector<Axis> axes, std::vector<cplx> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  if (axes_.empty() || axes_.size() > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  std::size_t total = 1;
  for (const Axis& a : axes_) {
    if (a.count < 2 || !std::has_single_bit(a.count))
      throw std::invalid_argument("axis point count must be a power of two >= 2");
    if (!(a.half_width > 0) || !std::isfinite(a.half_width) || !std::isfinite(a.center))
      throw std::invalid_argument("axis half-width must be positive and finite");
    total *= a.count;
  }
  if (values_.size() != total) throw std::invalid_argument("value count does not match grid");
  for (const cplx& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("sampled values must be finite");
}

SampledFunction SampledFunction::zeros(std::vector<Axis> axes) {
  std::size_t total = 1;
  for (const Axis& a : axes) total *= a.count;
  return SampledFunction(std::move(axes), std::vector<cplx>(total));
}

SampledFunction SampledFunction::sample(std::vector<Axis> axes, const Fn& f) {
  SampledFunction out = zeros(std::move(axes));
  std::vector<double> x(out.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto idx = out.unflatten(i);
    for (std::size_t d = 0; d < x.size(); ++d) x[d] = out.axes_[d].coord(idx[d]);
    out.values_[i] = f(x);
  }
  for (const cplx& v : out.values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("sampled values must be finite");
  return out;
}

double SampledFunction::cell_measure() const {
  double m = 1;
  for (const Axis& a : axes_) m *= a.spacing();
  return m;
}

std::vector<std::size_t> SampledFunction::shape() const {
  std::vector<std::size_t> s;
  for (const Axis& a : axes_) s.push_back(a.count);
  return s;
}

std::vector<std::size_t> SampledFunction::unflatten(std::size_t flat) const {
  std::vector<std::size_t> idx(axes_.size());
  for (std::size_t d = axes_.size(); d-- > 0;) {
    idx[d] = flat % axes_[d].count;
    flat /= axes_[d].count;
  }
  return idx;
}

std::size_t SampledFunction::flatten(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) flat = flat * axes_[d].count + idx[d];
  return flat;
}

std::vector<double> SampledFunction::coords(std::size_t flat) const {
  auto idx = unflatten(flat);
  std::vector<double> x(idx.size());
  for (std::size_t d = 0; d < idx.size(); ++d) x[d] = axes_[d].coord(idx[d]);
  return x;
}

double SampledFunction::sup_norm() const {
  double m = 0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SampledFunction::lp_norm(double p) const {
  if (std::isinf(p)) return sup_norm();
  double s = 0;
  for (const cplx& v : values_) s += std::pow(std::abs(v), p);
  return std::pow(s * cell_measure(), 1.0 / p);
}

double SampledFunction::support_measure() const {
  std::size_t n = 0;
  for (const cplx& v : values_) n += v != cplx{};
  return cell_measure() * static_cast<double>(n);
}

SampledFunction SampledFunction::map(const std::function<cplx(cplx)>& g) const {
  SampledFunction out = *this;
  for (cplx& v : out.values_) v = g(v);
  return out;
}

bool same_grid(const SampledFunction& a, const SampledFunction& b) { return a.axes() == b.axes(); }

namespace {

static_assert(std::endian::native == std::endian::little, "binary format assumes little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("truncated sampled-function stream");
  return v;
}

}  // namespace

void write_binary(const SampledFunction& f, std::ostream& out) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.dim()));
  for (const Axis& a : f.axes()) {
    put<double>(out, a.center);
    put<double>(out, a.half_width);
    put<std::uint64_t>(out, a.count);
  }
  for (const cplx& v : f.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
}

SampledFunction read_binary(std::istream& in) {
  auto n = get<std::uint32_t>(in);
  if (n < 1 || n > 3) throw std::runtime_error("bad dimension in sampled-function stream");
  std::vector<Axis> axes(n);
  std::size_t total = 1;
  for (Axis& a : axes) {
    a.center = get<double>(in);
    a.half_width = get<double>(in);
    a.count = static_cast<std::size_t>(get<std::uint64_t>(in));
    if (a.count < 2 || (a.count & (a.count - 1)) || a.count > (std::size_t{1} << 30))
      throw std::runtime_error("bad axis count in sampled-function stream");
    if (!(a.half_width > 0 && std::isfinite(a.half_width) && std::isfinite(a.center)))
      throw std::runtime_error("bad axis extent in sampled-function stream");
    total *= a.count;
    if (total > (std::size_t{1} << 30)) throw std::runtime_error("sampled-function stream too large");
  }
  std::vector<cplx> v(total);
  for (cplx& z : v) {
    double re = get<double>(in);
    double im = get<double>(in);
    z = {re, im};
  }
  return SampledFunction(std::move(axes), std::move(v));
}

void save_binary(const SampledFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_binary(f, out);
}

SampledFunction load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_binary(in);
}

void write_csv(const SampledFunction& f, std::ostream& out) {
  for (std::size_t d = 0; d < f.dim(); ++d) out << 'i' << d << ',';
  for (std::size_t d = 0; d < f.dim(); ++d) out << 'x' << d << ',';
  out << "re,im\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto idx = f.unflatten(i);
    for (std::size_t k : idx) out << k << ',';
    for (std::size_t d = 0; d < f.dim(); ++d) out << f.axis(d).coord(idx[d]) << ',';
    out << f[i].real() << ',' << f[i].imag() << '\n';
  }
}

}  // namespace mlab
