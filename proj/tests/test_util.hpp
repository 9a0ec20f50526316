#pragma once

// Shared fixtures for the unit suites: seeded random sets/measures and the
// independent brute-force oracles the operation tests compare against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/rng.hpp"

namespace testutil {

using namespace fraclab;

// Random 1-D set: <= max_cells cells inside [origin, origin + width) at
// resolution n (absolute cell units).
inline GridSet random_set_1d(Rng& rng, std::int64_t n, std::size_t max_cells, std::int64_t origin = 0,
                             std::int64_t width = 0) {
    if (width <= 0) width = n;
    const std::size_t target = 1 + rng.below(max_cells);
    std::set<std::int64_t> abs;
    for (std::size_t i = 0; i < target; ++i) abs.insert(origin + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(width))));
    GridSet s;
    s.dim = 1;
    s.resolution = n;
    const std::int64_t lo = *abs.begin();
    const std::int64_t hi = *abs.rbegin();
    s.origin = {lo};
    s.extent = {hi - lo + 1};
    for (std::int64_t p : abs) s.cells.push_back(static_cast<std::uint64_t>(p - lo));
    return s;
}

// Random d-dim set of <= max_cells cells in [0,1)^d.
inline GridSet random_set(Rng& rng, int dim, std::int64_t n, std::size_t max_cells) {
    const std::size_t target = 1 + rng.below(max_cells);
    std::set<std::vector<std::int64_t>> idx;
    for (std::size_t i = 0; i < target; ++i) {
        std::vector<std::int64_t> p(static_cast<std::size_t>(dim));
        for (auto& x : p) x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
        idx.insert(std::move(p));
    }
    GridSet s;
    s.dim = dim;
    s.resolution = n;
    s.origin.assign(static_cast<std::size_t>(dim), 0);
    s.extent.assign(static_cast<std::size_t>(dim), n);
    for (const auto& p : idx) s.cells.push_back(s.flatten(p));
    std::sort(s.cells.begin(), s.cells.end());
    return s;
}

inline WeightedMeasure random_measure(Rng& rng, const GridSet& s) {
    WeightedMeasure m;
    m.support = s;
    double total = 0.0;
    for (std::size_t i = 0; i < s.count(); ++i) {
        m.weights.push_back(0.05 + rng.uniform());
        total += m.weights.back();
    }
    for (auto& w : m.weights) w /= total;
    // compensate the final entry so the sum is exactly renormalized
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < m.weights.size(); ++i) sum += m.weights[i];
    m.weights.back() = 1.0 - sum;
    return m;
}

// Independent sumset oracle: double loop, {i+j, i+j+1}.
inline std::set<std::int64_t> sumset_oracle(const GridSet& a, const GridSet& b) {
    std::set<std::int64_t> out;
    for (std::uint64_t ca : a.cells)
        for (std::uint64_t cb : b.cells) {
            const std::int64_t s = (a.origin[0] + static_cast<std::int64_t>(ca)) +
                                   (b.origin[0] + static_cast<std::int64_t>(cb));
            out.insert(s);
            out.insert(s + 1);
        }
    return out;
}

// Independent product-set oracle from corner products.
inline std::set<std::int64_t> productset_oracle(const GridSet& a, const GridSet& b) {
    auto fdiv = [](std::int64_t x, std::int64_t y) {
        std::int64_t q = x / y;
        if (x % y != 0 && ((x < 0) != (y < 0))) --q;
        return q;
    };
    std::set<std::int64_t> out;
    const std::int64_t n = a.resolution;
    for (std::uint64_t ca : a.cells) {
        const std::int64_t p = a.origin[0] + static_cast<std::int64_t>(ca);
        for (std::uint64_t cb : b.cells) {
            const std::int64_t q = b.origin[0] + static_cast<std::int64_t>(cb);
            const std::int64_t c[4] = {p * q, p * (q + 1), (p + 1) * q, (p + 1) * (q + 1)};
            const std::int64_t mn = *std::min_element(c, c + 4);
            const std::int64_t mx = *std::max_element(c, c + 4);
            for (std::int64_t j = fdiv(mn, n); j <= fdiv(mx, n); ++j) out.insert(j);
        }
    }
    return out;
}

inline std::set<std::int64_t> abs_cells(const GridSet& s) {
    std::set<std::int64_t> out;
    for (std::uint64_t c : s.cells) out.insert(s.origin[0] + static_cast<std::int64_t>(c));
    return out;
}

}  // namespace testutil
