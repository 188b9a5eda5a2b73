#pragma once

namespace mlab::fft {

template <class F>
SampledFunction apply_diagonal(const SampledFunction& f, F&& factor) {
  std::vector<cplx> data = f.values();
  auto shape = f.shape();
  transform(data, shape, -1);
  auto freqs = frequencies(f.axes());
  std::vector<double> xi(shape.size());
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::size_t rest = i;
    for (std::size_t d = shape.size(); d-- > 0;) {
      xi[d] = freqs[d][rest % shape[d]];
      rest /= shape[d];
    }
    data[i] *= factor(i, std::span<const double>(xi)) * inv_n;
  }
  transform(data, shape, +1);
  return SampledFunction(f.axes(), std::move(data));
}

}  // namespace mlab::fft
