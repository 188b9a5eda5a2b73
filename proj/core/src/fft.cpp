#include "mlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace mlab::fft {

namespace {

// FFTW planning is not thread-safe; execution with new-array functions is.
std::mutex plan_mutex;

fftw_plan get_plan(const std::vector<int>& dims, int sign) {
  static std::map<std::pair<std::vector<int>, int>, fftw_plan> cache;
  std::lock_guard lock(plan_mutex);
  auto key = std::make_pair(dims, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  std::vector<cplx> scratch(total);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), p, p,
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("fftw planning failed");
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

void transform(std::span<cplx> data, std::span<const std::size_t> shape, int sign) {
  std::vector<int> dims;
  std::size_t total = 1;
  for (std::size_t s : shape) {
    dims.push_back(static_cast<int>(s));
    total *= s;
  }
  if (total != data.size()) throw std::invalid_argument("fft shape mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(get_plan(dims, sign), p, p);
}

double frequency(const Axis& a, std::size_t k) {
  auto n = static_cast<long>(a.count);
  auto m = static_cast<long>(k);
  if (m >= n / 2) m -= n;
  return static_cast<double>(m) / (2.0 * a.half_width);
}

std::vector<std::vector<double>> frequencies(const std::vector<Axis>& axes) {
  std::vector<std::vector<double>> out;
  for (const Axis& a : axes) {
    std::vector<double> f(a.count);
    for (std::size_t k = 0; k < a.count; ++k) f[k] = frequency(a, k);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<cplx> continuous_transform(const SampledFunction& f) {
  std::vector<cplx> data = f.values();
  auto shape = f.shape();
  transform(data, shape, -1);
  const double cm = f.cell_measure();
  for (cplx& z : data) z *= cm;
  return data;
}

}  // namespace mlab::fft
