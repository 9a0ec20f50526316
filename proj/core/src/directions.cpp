#include "fraclab/directions.hpp"

#include <cmath>
#include <numbers>

#include "fraclab/errors.hpp"
#include "fraclab/rng.hpp"

namespace fraclab {

std::vector<std::vector<double>> unit_directions(int dim, int count, std::uint64_t seed) {
    if (dim < 1) throw precondition_error("unit_directions: dimension must be >= 1");
    if (count < 1) throw precondition_error("unit_directions: count must be >= 1");

    std::vector<std::vector<double>> dirs;
    dirs.reserve(static_cast<std::size_t>(count));

    if (dim == 1) {
        dirs.push_back({1.0});
        return dirs;
    }

    if (dim == 2) {
        for (int k = 0; k < count; ++k) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
            dirs.push_back({std::cos(theta), std::sin(theta)});
        }
        return dirs;
    }

    if (dim == 3) {
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (int k = 0; k < count; ++k) {
            const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(count);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / golden;
            dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
        }
        return dirs;
    }

    Rng gen(hash_combine(seed, 0x64697273ull));
    for (int k = 0; k < count; ++k) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& x : v) {
                x = gen.normal();
                norm += x * x;
            }
        } while (norm < 1e-12);
        norm = std::sqrt(norm);
        for (auto& x : v) x /= norm;
        dirs.push_back(std::move(v));
    }
    return dirs;
}

}  // namespace fraclab
