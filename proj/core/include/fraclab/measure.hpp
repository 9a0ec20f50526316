#pragma once

#include <cstdint>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

// Discretized Frostman exponent: largest s with mass(window) <= C * r^s
// across the scale ladder, with the witnessing constant.
struct FrostmanFit {
    double exponent = 0.0;
    double constant = 1.0;
    double window_min = 0.0;  // finest scale used
    double window_max = 1.0;  // coarsest scale used
};

// A probability measure on the cells of a GridSet. weights[i] belongs to
// support.cells[i]; weights are nonnegative and sum to 1 within 1e-12.
struct WeightedMeasure {
    GridSet support;
    std::vector<double> weights;

    int dim() const { return support.dim; }
    std::int64_t resolution() const { return support.resolution; }
    double total_mass() const;
    void validate() const;
};

// Weight 1/count on every cell.
WeightedMeasure uniform_measure(const GridSet& s);

// Groups mass into windows of k cells per axis (k need not divide N; the
// windows tile the absolute lattice).
WeightedMeasure coarsen_measure(const WeightedMeasure& m, std::int64_t k);

FrostmanFit frostman_fit(const WeightedMeasure& m);

// The window-size ladder used by frostman_fit: 1 = k_0 < k_1 < ... <= N
// following the prime factorization of N, smallest factors first.
std::vector<std::int64_t> scale_ladder(std::int64_t resolution);

}  // namespace fraclab
