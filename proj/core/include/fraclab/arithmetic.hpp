#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"

namespace fraclab {

// Cells cover half-open intervals, so a + b covers two unit cells: the
// result holds {i+j, i+j+1} for every occupied pair, an outer cover of the
// true interval sumset.
GridSet sumset(const GridSet& a, const GridSet& b);

// Outer cover of {x*y} from exact integer corner products. Supports must
// lie in [-box, box].
GridSet productset(const GridSet& a, const GridSet& b, double box = 2.0);

// a_1*A + a_2*A + ... + a_d*A via iterated interval-arithmetic sums of the
// dilated covers.
GridSet dilated_sum(std::span<const double> coeffs, const GridSet& a);

// Pushforward of m1 x m2 under addition; the two-cell interval sum of a
// cell pair splits its mass evenly (the exact uniform-by-uniform split).
WeightedMeasure convolve_sum_measures(const WeightedMeasure& m1, const WeightedMeasure& m2);

// Coefficient tuples for the dilated-sum probes: centers of cells of `a`
// drawn by the seeded generator.
std::vector<double> sample_coefficients(const GridSet& a, int count, std::uint64_t seed);

// Outer cover of c*A on the same grid.
GridSet dilate_cover(const GridSet& a, double c);

}  // namespace fraclab
