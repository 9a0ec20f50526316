#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

// Pairwise distances |x_i - x_j|, i < j, in the canonical pair order
// (0,1),(0,2),...,(0,k),(1,2),... A complete congruence invariant.
std::vector<double> congruence_vector(const std::vector<std::vector<double>>& points);

// Same vector computed through the sphere identity
// |x - y|^2 = 2 t^2 - 2 (x-z).(y-z) for points on the sphere of radius t
// about z. Cross-check route for spherical tuples.
std::vector<double> congruence_vector_on_sphere(const std::vector<std::vector<double>>& points,
                                               std::span<const double> center, double radius);

// Max-norm agreement of congruence vectors within tol.
bool congruent_check(const std::vector<std::vector<double>>& t1,
                     const std::vector<std::vector<double>>& t2, double tol);

// Occupancy statistics of binned congruence vectors of sampled
// (k+1)-tuples. Each of the (k+1 choose 2) coordinates is binned into M
// bins over [0, diam(E)]; `reachable` counts the triangle-feasible bins
// of that box.
struct SimplexSpectrum {
    int k = 1;
    int dim = 1;
    std::int64_t bin_resolution = 1;
    double diameter = 0.0;
    std::uint64_t sampled_tuples = 0;
    std::uint64_t occupied_bins = 0;
    std::uint64_t reachable_bins = 0;
    double box_fraction = 0.0;        // occupied / M^(k+1 choose 2)
    double reachable_fraction = 0.0;  // occupied / reachable
    std::vector<std::pair<std::uint64_t, std::uint64_t>> saturation_curve;  // (samples, occupied)
    std::vector<std::uint64_t> bins;  // sorted occupied bin ids

    bool operator==(const SimplexSpectrum&) const = default;
};

SimplexSpectrum simplex_spectrum(const GridSet& e, int k, std::uint64_t samples,
                                 std::int64_t bin_resolution, std::uint64_t seed);

// Set diameter: max center distance plus one cell diameter.
double set_diameter(const GridSet& e);

}  // namespace fraclab
