#include "fraclab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fraclab/errors.hpp"
#include "fraclab/directions.hpp"
#include "fraclab/rng.hpp"

namespace fraclab {

std::vector<double> congruence_vector(const std::vector<std::vector<double>>& points) {
    const std::size_t m = points.size();
    if (m < 2) throw precondition_error("congruence_vector: need >= 2 points");
    const std::size_t d = points.front().size();
    for (const auto& p : points)
        if (p.size() != d) throw precondition_error("congruence_vector: mixed point dimensions");
    if (m > d + 1)
        throw precondition_error("congruence_vector: tuple size must be <= d + 1");
    std::vector<double> v;
    v.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            double r2 = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                const double dx = points[i][a] - points[j][a];
                r2 += dx * dx;
            }
            v.push_back(std::sqrt(r2));
        }
    }
    return v;
}

std::vector<double> congruence_vector_on_sphere(const std::vector<std::vector<double>>& points,
                                               std::span<const double> center, double radius) {
    const std::size_t m = points.size();
    if (m < 2) throw precondition_error("congruence_vector_on_sphere: need >= 2 points");
    const std::size_t d = center.size();
    std::vector<double> v;
    v.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            double dot = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                dot += (points[i][a] - center[a]) * (points[j][a] - center[a]);
            v.push_back(std::sqrt(std::max(0.0, 2.0 * radius * radius - 2.0 * dot)));
        }
    }
    return v;
}

bool congruent_check(const std::vector<std::vector<double>>& t1,
                     const std::vector<std::vector<double>>& t2, double tol) {
    if (t1.size() != t2.size()) throw precondition_error("congruent_check: tuple sizes differ");
    if (!t1.empty() && t1.front().size() != t2.front().size())
        throw precondition_error("congruent_check: point dimensions differ");
    const auto v1 = congruence_vector(t1);
    const auto v2 = congruence_vector(t2);
    for (std::size_t i = 0; i < v1.size(); ++i)
        if (std::fabs(v1[i] - v2[i]) > tol) return false;
    return true;
}

double set_diameter(const GridSet& e) {
    e.validate();
    if (e.cells.empty()) return 0.0;
    const auto d = static_cast<std::size_t>(e.dim);
    const std::size_t n = e.cells.size();
    std::vector<double> centers(n * d);
    for (std::size_t i = 0; i < n; ++i)
        e.cell_center(e.cells[i], std::span<double>(centers.data() + i * d, d));

    auto pair_scan = [&](const std::vector<std::size_t>& ids) {
        double best2 = 0.0;
        for (std::size_t a = 0; a < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b) {
                double r2 = 0.0;
                for (std::size_t ax = 0; ax < d; ++ax) {
                    const double dx = centers[ids[a] * d + ax] - centers[ids[b] * d + ax];
                    r2 += dx * dx;
                }
                best2 = std::max(best2, r2);
            }
        return best2;
    };

    std::vector<std::size_t> ids;
    if (n <= 8192) {
        ids.resize(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    } else {
        // the diameter pair lies on the convex hull; scan the extreme
        // points of a dense direction fan instead of all pairs
        const auto dirs = unit_directions(e.dim, 512);
        std::vector<std::size_t> extremes;
        for (const auto& u : dirs) {
            std::size_t arg = 0;
            double best = -1e300;
            for (std::size_t i = 0; i < n; ++i) {
                double dot = 0.0;
                for (std::size_t ax = 0; ax < d; ++ax) dot += centers[i * d + ax] * u[ax];
                if (dot > best) {
                    best = dot;
                    arg = i;
                }
            }
            extremes.push_back(arg);
        }
        std::sort(extremes.begin(), extremes.end());
        extremes.erase(std::unique(extremes.begin(), extremes.end()), extremes.end());
        ids = std::move(extremes);
    }
    return std::sqrt(pair_scan(ids)) + e.cell_diameter();
}

namespace {

// Every triple of pair-coordinates (ij), (il), (lj) must satisfy the
// triangle inequality at the bin centers.
bool triangle_feasible(std::span<const std::int64_t> bin, int k, double inv_m) {
    const int m = k + 1;
    auto pair_pos = [m](int i, int j) {
        // index of (i,j), i<j, in the canonical order
        return i * (2 * m - i - 1) / 2 + (j - i - 1);
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int l = j + 1; l < m; ++l) {
                const double a = (static_cast<double>(bin[pair_pos(i, j)]) + 0.5) * inv_m;
                const double b = (static_cast<double>(bin[pair_pos(i, l)]) + 0.5) * inv_m;
                const double c = (static_cast<double>(bin[pair_pos(j, l)]) + 0.5) * inv_m;
                if (a > b + c || b > a + c || c > a + b) return false;
            }
    return true;
}

}  // namespace

SimplexSpectrum simplex_spectrum(const GridSet& e, int k, std::uint64_t samples,
                                 std::int64_t bin_resolution, std::uint64_t seed) {
    e.validate();
    if (e.cells.empty()) throw precondition_error("simplex_spectrum: empty set");
    if (k < 1 || k > e.dim) throw precondition_error("simplex_spectrum: k must lie in [1, d]");
    if (samples < 1000) throw precondition_error("simplex_spectrum: need >= 1000 samples");
    if (bin_resolution < 1) throw precondition_error("simplex_spectrum: bin resolution must be >= 1");

    const int d = e.dim;
    const int tuple = k + 1;
    const int n_pairs = tuple * (tuple - 1) / 2;
    const std::size_t n_cells = e.cells.size();
    const std::int64_t m_bins = bin_resolution;

    __int128 total_bins = 1;
    for (int i = 0; i < n_pairs; ++i) {
        total_bins *= m_bins;
        if (total_bins > (__int128{1} << 62))
            throw resource_error("simplex_spectrum: bin lattice exceeds the index range");
    }

    SimplexSpectrum spec;
    spec.k = k;
    spec.dim = d;
    spec.bin_resolution = m_bins;
    spec.diameter = set_diameter(e);
    spec.sampled_tuples = samples;
    const double scale = static_cast<double>(m_bins) / spec.diameter;

    std::vector<double> centers(n_cells * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n_cells; ++i)
        e.cell_center(e.cells[i], std::span<double>(centers.data() + i * static_cast<std::size_t>(d),
                                                    static_cast<std::size_t>(d)));

    // per-sample streams keyed by (seed, sample index): the spectrum does
    // not depend on how samples are scheduled
    std::unordered_set<std::uint64_t> occupied;
    occupied.reserve(4096);
    const std::uint64_t checkpoint = std::max<std::uint64_t>(1, samples / 100);
    std::vector<std::size_t> pick(static_cast<std::size_t>(tuple));
    for (std::uint64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::stream(seed, s);
        for (int i = 0; i < tuple; ++i) pick[static_cast<std::size_t>(i)] = rng.below(n_cells);
        std::uint64_t id = 0;
        for (int i = 0; i < tuple; ++i) {
            const double* ci = centers.data() + pick[static_cast<std::size_t>(i)] * static_cast<std::size_t>(d);
            for (int j = i + 1; j < tuple; ++j) {
                const double* cj = centers.data() + pick[static_cast<std::size_t>(j)] * static_cast<std::size_t>(d);
                double r2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    const double dx = ci[a] - cj[a];
                    r2 += dx * dx;
                }
                auto b = static_cast<std::int64_t>(std::sqrt(r2) * scale);
                if (b >= m_bins) b = m_bins - 1;
                id = id * static_cast<std::uint64_t>(m_bins) + static_cast<std::uint64_t>(b);
            }
        }
        occupied.insert(id);
        if ((s + 1) % checkpoint == 0 || s + 1 == samples)
            spec.saturation_curve.emplace_back(s + 1, occupied.size());
    }

    spec.occupied_bins = occupied.size();
    spec.bins.assign(occupied.begin(), occupied.end());
    std::sort(spec.bins.begin(), spec.bins.end());

    spec.box_fraction = static_cast<double>(spec.occupied_bins) / static_cast<double>(total_bins);

    // reachable-region estimate: triangle-feasible bins of the range box
    if (k == 1) {
        spec.reachable_bins = static_cast<std::uint64_t>(m_bins);
    } else if (total_bins <= (__int128{1} << 24)) {
        const double inv_m = 1.0 / static_cast<double>(m_bins);
        std::vector<std::int64_t> bin(static_cast<std::size_t>(n_pairs), 0);
        std::uint64_t feasible = 0;
        while (true) {
            if (triangle_feasible(bin, k, inv_m)) ++feasible;
            int a = n_pairs;
            bool done = false;
            while (a > 0) {
                --a;
                if (++bin[static_cast<std::size_t>(a)] < m_bins) break;
                bin[static_cast<std::size_t>(a)] = 0;
                if (a == 0) done = true;
            }
            if (done) break;
        }
        spec.reachable_bins = feasible;
    } else {
        spec.reachable_bins = static_cast<std::uint64_t>(total_bins);  // too large to enumerate
    }
    spec.reachable_fraction =
        spec.reachable_bins ? static_cast<double>(spec.occupied_bins) / static_cast<double>(spec.reachable_bins) : 0.0;
    return spec;
}

}  // namespace fraclab
