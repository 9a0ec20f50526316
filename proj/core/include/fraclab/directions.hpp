#pragma once

#include <cstdint>
#include <vector>

namespace fraclab {

// Deterministic unit direction sets.
//   d = 1: {+1}.
//   d = 2: equally spaced angles 2*pi*k/count starting at angle 0, so the
//          lattice directions (1,0), (0,1), (1,1)/sqrt2 are present when
//          count is a multiple of 8.
//   d = 3: Fibonacci sphere points.
//   d >= 4: seeded Gaussian normalization.
// The seed only affects the d >= 4 fallback; lower dimensions are
// canonical and reproducible by construction.
std::vector<std::vector<double>> unit_directions(int dim, int count, std::uint64_t seed = 0);

}  // namespace fraclab
