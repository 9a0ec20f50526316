#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"

namespace fraclab {

// Tube-mass power profile mu(T_delta) ~ delta^exponent over a delta ladder,
// maximized over a direction set, with the derived deficit
// l_f = s_f - exponent.
struct TubeProfile {
    int direction_count = 0;
    std::vector<std::pair<double, double>> samples;  // (delta, max mass), delta decreasing
    double exponent = 0.0;
    double l_f = 0.0;
    double residual = 0.0;
};

// Pushforward of m under x -> x.y onto a 1-D grid at the same resolution.
// Cell mass is split over the covered output cells proportionally to
// overlap length. y = 0 degenerates to all mass at 0 (allowed, not an
// error).
WeightedMeasure project_measure(const WeightedMeasure& m, std::span<const double> y);

// Pushforward under x -> (x.y1, ..., x.yk), outer-covered on a k-dim grid,
// mass split per axis. k must satisfy 1 <= k <= d.
WeightedMeasure multi_project(const WeightedMeasure& m, const std::vector<std::vector<double>>& ys);

// Mass of cells whose center lies within delta of the segment
// {s * xi/|xi| : s in [0, 10]}.
double tube_mass(const WeightedMeasure& m, std::span<const double> xi, double delta);

TubeProfile tube_profile(const WeightedMeasure& m, const std::vector<std::vector<double>>& directions,
                         std::span<const double> deltas, double s_f);

// Outer cover of {|x - y| : x in E} on a 1-D grid at E's resolution.
GridSet pinned_distances(const GridSet& e, std::span<const double> y);

// Max over (delta, direction) of the number of delta-balls a greedy cover
// needs for the tube-restricted cell centers.
double star_like_score(const GridSet& f, std::span<const double> deltas,
                       const std::vector<std::vector<double>>& directions);

}  // namespace fraclab
