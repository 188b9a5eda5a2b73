#pragma once

#include <span>
#include <vector>

#include "mlab/grid.hpp"

namespace mlab::fft {

// In-place unnormalized n-d DFT over a row-major array of the given shape.
// sign -1 is the forward transform e^{-2 pi i k m / N}.
void transform(std::span<cplx> data, std::span<const std::size_t> shape, int sign);

// Frequency of DFT index k on an axis: (k < N/2 ? k : k - N) / (2L).
double frequency(const Axis& a, std::size_t k);

// Frequencies of every DFT index, per axis.
std::vector<std::vector<double>> frequencies(const std::vector<Axis>& axes);

// Samples of the continuous transform int f(x) e^{-2 pi i x xi} dx at the DFT
// frequencies, in DFT index order (magnitudes exact up to the grid phase).
std::vector<cplx> continuous_transform(const SampledFunction& f);

// Multiplies the DFT of f by a diagonal factor given per flat DFT index and inverts.
// `factor(flat_index, xi)` receives the frequency vector of that index.
template <class F>
SampledFunction apply_diagonal(const SampledFunction& f, F&& factor);

}  // namespace mlab::fft

#include "mlab/fft_impl.hpp"
