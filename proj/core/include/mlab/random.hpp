#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mlab/grid.hpp"

namespace mlab::random {

// Independent deterministic stream for (root seed, task index).
std::mt19937_64 stream(std::uint64_t root, std::uint64_t task);

// Trigonometric polynomial periodic on the box,
//   f(x) = sum_{|m_i| <= max_mode} c_m exp(2 pi i sum_i m_i x_i / (2 L_i)),
// with complex Gaussian c_m drawn from a stream keyed by (seed, m). The function
// does not depend on the point counts, so refining the grid samples the same f.
// real_valued symmetrizes the coefficients.
SampledFunction band_limited(const std::vector<Axis>& axes, int max_mode, std::uint64_t seed,
                             bool real_valued = false);

}  // namespace mlab::random
