#include "fraclab/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/numeric.hpp"

namespace fraclab {

namespace {
std::atomic<std::uint64_t> g_cell_budget{std::uint64_t{1} << 26};
}

std::uint64_t cell_budget() { return g_cell_budget.load(); }
void set_cell_budget(std::uint64_t budget) { g_cell_budget.store(budget); }

namespace detail {
void check_budget(std::uint64_t needed, const char* op) {
    const std::uint64_t budget = cell_budget();
    if (needed > budget) {
        throw resource_error(std::string(op) + ": would materialize " + std::to_string(needed) +
                             " cells; cell budget is " + std::to_string(budget) +
                             " (set --cell-budget or FRACLAB_CELL_BUDGET)");
    }
}
}  // namespace detail

// ---------------------------------------------------------------- CantorSpec

void CantorSpec::validate() const {
    if (base < 2) throw precondition_error("cantor: base must be >= 2");
    if (depth < 1) throw precondition_error("cantor: depth must be >= 1");
    if (digits.empty()) throw precondition_error("cantor: digit set must be nonempty");
    std::vector<int> d = digits;
    std::sort(d.begin(), d.end());
    if (std::adjacent_find(d.begin(), d.end()) != d.end())
        throw precondition_error("cantor: duplicate digits");
    if (d.front() < 0 || d.back() >= base)
        throw precondition_error("cantor: digits must lie in [0, base)");
}

double CantorSpec::dimension() const {
    return std::log(static_cast<double>(digits.size())) / std::log(static_cast<double>(base));
}

std::int64_t CantorSpec::resolution() const {
    __int128 n = 1;
    for (int i = 0; i < depth; ++i) {
        n *= base;
        if (n > std::int64_t{1} << 62) throw resource_error("cantor: base^depth overflows the grid index range");
    }
    return static_cast<std::int64_t>(n);
}

std::uint64_t CantorSpec::cell_count() const {
    __int128 n = 1;
    for (int i = 0; i < depth; ++i) {
        n *= static_cast<int>(digits.size());
        if (n > (__int128{1} << 63)) throw resource_error("cantor: |digits|^depth overflows");
    }
    return static_cast<std::uint64_t>(n);
}

// ------------------------------------------------------------------- GridSet

std::uint64_t GridSet::total_extent_cells() const {
    __int128 t = 1;
    for (std::int64_t e : extent) t *= e;
    return static_cast<std::uint64_t>(t);
}

std::uint64_t GridSet::flatten(std::span<const std::int64_t> index) const {
    std::uint64_t flat = 0;
    for (int a = 0; a < dim; ++a) flat = flat * static_cast<std::uint64_t>(extent[a]) + static_cast<std::uint64_t>(index[a]);
    return flat;
}

void GridSet::unflatten(std::uint64_t flat, std::span<std::int64_t> index) const {
    for (int a = dim - 1; a >= 0; --a) {
        const auto e = static_cast<std::uint64_t>(extent[a]);
        index[a] = static_cast<std::int64_t>(flat % e);
        flat /= e;
    }
}

std::vector<std::int64_t> GridSet::cell_index(std::uint64_t flat) const {
    std::vector<std::int64_t> idx(dim);
    unflatten(flat, idx);
    return idx;
}

void GridSet::cell_center(std::uint64_t flat, std::span<double> out) const {
    std::int64_t idx[16];
    unflatten(flat, std::span<std::int64_t>(idx, dim));
    for (int a = 0; a < dim; ++a)
        out[a] = (static_cast<double>(origin[a] + idx[a]) + 0.5) / static_cast<double>(resolution);
}

std::vector<double> GridSet::cell_center(std::uint64_t flat) const {
    std::vector<double> c(dim);
    cell_center(flat, c);
    return c;
}

double GridSet::cell_diameter() const {
    return std::sqrt(static_cast<double>(dim)) / static_cast<double>(resolution);
}

void GridSet::validate() const {
    if (dim < 1 || dim > 16) throw precondition_error("grid set: dimension out of range");
    if (resolution < 1) throw precondition_error("grid set: resolution must be positive");
    if (static_cast<int>(origin.size()) != dim || static_cast<int>(extent.size()) != dim)
        throw precondition_error("grid set: origin/extent size mismatch");
    for (std::int64_t e : extent)
        if (e < 1) throw precondition_error("grid set: extent must be positive");
    if (cells.empty() && !filtered)
        throw precondition_error("grid set: empty cell list without filter flag");
    const std::uint64_t total = total_extent_cells();
    std::uint64_t prev = 0;
    bool first = true;
    for (std::uint64_t c : cells) {
        if (c >= total) throw precondition_error("grid set: cell index outside extent");
        if (!first && c <= prev) throw precondition_error("grid set: cells not sorted/unique");
        prev = c;
        first = false;
    }
}

// ---------------------------------------------------------------- generators

GridSet make_cantor(const CantorSpec& spec) {
    spec.validate();
    const std::uint64_t n_cells = spec.cell_count();
    detail::check_budget(n_cells, "make_cantor");
    const std::int64_t n = spec.resolution();

    std::vector<int> digits = spec.digits;
    std::sort(digits.begin(), digits.end());

    std::vector<std::uint64_t> cells{0};
    for (int level = 0; level < spec.depth; ++level) {
        std::vector<std::uint64_t> next;
        next.reserve(cells.size() * digits.size());
        for (std::uint64_t c : cells)
            for (int d : digits) next.push_back(c * static_cast<std::uint64_t>(spec.base) + static_cast<std::uint64_t>(d));
        cells.swap(next);
    }
    // digits sorted => expansion already sorted

    GridSet s;
    s.dim = 1;
    s.resolution = n;
    s.origin = {0};
    s.extent = {n};
    s.cells = std::move(cells);
    return s;
}

GridSet make_full_interval(std::int64_t resolution) {
    if (resolution < 1) throw precondition_error("make_full_interval: resolution must be positive");
    detail::check_budget(static_cast<std::uint64_t>(resolution), "make_full_interval");
    GridSet s;
    s.dim = 1;
    s.resolution = resolution;
    s.origin = {0};
    s.extent = {resolution};
    s.cells.resize(static_cast<std::size_t>(resolution));
    for (std::size_t i = 0; i < s.cells.size(); ++i) s.cells[i] = i;
    return s;
}

GridSet make_product(const std::vector<GridSet>& factors) {
    if (factors.size() < 2) throw precondition_error("make_product: need >= 2 factors");
    const std::int64_t n = factors.front().resolution;
    __int128 total = 1;
    for (const GridSet& f : factors) {
        f.validate();
        if (f.dim != 1) throw precondition_error("make_product: factors must be 1-D");
        if (f.resolution != n) throw precondition_error("make_product: factor resolutions differ");
        total *= static_cast<std::int64_t>(f.count());
    }
    if (total > (__int128{1} << 62)) throw resource_error("make_product: cell count overflows");
    detail::check_budget(static_cast<std::uint64_t>(total), "make_product");

    GridSet s;
    s.dim = static_cast<int>(factors.size());
    s.resolution = n;
    for (const GridSet& f : factors) {
        s.origin.push_back(f.origin[0]);
        s.extent.push_back(f.extent[0]);
    }
    s.cells.reserve(static_cast<std::size_t>(total));
    std::vector<std::size_t> pos(factors.size(), 0);
    while (true) {
        std::uint64_t flat = 0;
        for (std::size_t a = 0; a < factors.size(); ++a)
            flat = flat * static_cast<std::uint64_t>(s.extent[a]) + factors[a].cells[pos[a]];
        s.cells.push_back(flat);
        std::size_t a = factors.size();
        while (a > 0) {
            --a;
            if (++pos[a] < factors[a].count()) break;
            pos[a] = 0;
            if (a == 0) {
                s.validate();
                return s;
            }
        }
    }
}

void SphereSubsetSpec::validate() const {
    if (dim < 2) throw precondition_error("sphere subset: ambient dimension must be >= 2");
    if (radius <= 0.0) throw precondition_error("sphere subset: radius must be positive");
    if (angular) {
        angular->validate();
        if (angular->dimension() <= 0.0 || angular->dimension() > 1.0)
            throw precondition_error("sphere subset: angular dimension must lie in (0,1]");
    }
}

namespace {

// Is u in the depth-n union of closed base-b digit intervals?
bool in_cantor_intervals(double u, const CantorSpec& spec) {
    if (u < 0.0) u = 0.0;
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    double x = u;
    for (int level = 0; level < spec.depth; ++level) {
        x *= static_cast<double>(spec.base);
        int digit = static_cast<int>(std::floor(x));
        if (digit >= static_cast<int>(spec.base)) digit = static_cast<int>(spec.base) - 1;
        bool ok = false;
        for (int d : spec.digits) {
            if (d == digit) {
                ok = true;
                break;
            }
            // closed intervals: accept the right endpoint of a kept interval
            if (digit == d + 1 && x - std::floor(x) < 1e-12) {
                ok = true;
                digit = d;
                break;
            }
        }
        if (!ok) return false;
        x -= digit;
    }
    return true;
}

// Normalized angular coordinates of a point on/near the sphere:
// d-1 entries, the first d-2 polar angles over [0,pi] mapped to [0,1),
// the azimuth over [0,2pi) mapped to [0,1).
void normalized_angles(std::span<const double> x, std::span<double> out) {
    const int d = static_cast<int>(x.size());
    double tail2 = x[d - 1] * x[d - 1] + x[d - 2] * x[d - 2];
    for (int j = d - 3; j >= 0; --j) {
        const double t = std::sqrt(tail2);
        out[static_cast<std::size_t>(j)] = std::atan2(t, x[j]) / std::numbers::pi;
        tail2 += x[j] * x[j];
    }
    double az = std::atan2(x[d - 1], x[d - 2]);
    if (az < 0.0) az += 2.0 * std::numbers::pi;
    out[static_cast<std::size_t>(d - 2)] = az / (2.0 * std::numbers::pi);
}

}  // namespace

GridSet make_sphere_subset(const SphereSubsetSpec& spec, std::int64_t resolution) {
    spec.validate();
    if (resolution < 1) throw precondition_error("make_sphere_subset: resolution must be positive");
    const int d = spec.dim;
    const double diam = std::sqrt(static_cast<double>(d)) / static_cast<double>(resolution);
    if (!(diam < spec.radius / 10.0))
        throw precondition_error("make_sphere_subset: resolution too coarse (cell diameter must be < radius/10)");

    const double bound = spec.radius + 2.0 * diam;
    const std::int64_t lo = static_cast<std::int64_t>(std::floor(-bound * static_cast<double>(resolution))) - 1;
    const std::int64_t hi = static_cast<std::int64_t>(std::ceil(bound * static_cast<double>(resolution))) + 1;
    const std::int64_t side = hi - lo;
    __int128 scan = 1;
    for (int a = 0; a < d; ++a) scan *= side;
    if (scan > (__int128{1} << 28))
        throw resource_error("make_sphere_subset: bounding-box scan of " + std::to_string(static_cast<double>(scan)) +
                             " cells exceeds the scan cap; lower the resolution");

    GridSet s;
    s.dim = d;
    s.resolution = resolution;
    s.origin.assign(static_cast<std::size_t>(d), lo);
    s.extent.assign(static_cast<std::size_t>(d), side);

    std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> center(static_cast<std::size_t>(d));
    std::vector<double> angles(static_cast<std::size_t>(d - 1));
    while (true) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            center[a] = (static_cast<double>(lo + idx[a]) + 0.5) / static_cast<double>(resolution);
            r2 += center[a] * center[a];
        }
        const double r = std::sqrt(r2);
        if (std::fabs(r - spec.radius) <= diam) {
            bool keep = true;
            if (spec.angular) {
                normalized_angles(center, angles);
                for (double u : angles) {
                    if (!in_cantor_intervals(u, *spec.angular)) {
                        keep = false;
                        break;
                    }
                }
            }
            if (keep) {
                s.cells.push_back(s.flatten(idx));
                if (s.cells.size() > cell_budget())
                    detail::check_budget(s.cells.size(), "make_sphere_subset");
            }
        }
        int a = d;
        while (a > 0) {
            --a;
            if (++idx[a] < side) break;
            idx[a] = 0;
            if (a == 0) {
                std::sort(s.cells.begin(), s.cells.end());
                s.validate();
                return s;
            }
        }
    }
}

GridSet coarsen(const GridSet& s, std::int64_t k) {
    s.validate();
    if (k < 2) throw precondition_error("coarsen: factor must be >= 2");
    if (s.resolution % k != 0) throw precondition_error("coarsen: factor must divide the resolution");

    GridSet c;
    c.dim = s.dim;
    c.resolution = s.resolution / k;
    c.filtered = s.filtered;
    c.origin.resize(s.origin.size());
    c.extent.resize(s.extent.size());
    for (int a = 0; a < s.dim; ++a) {
        c.origin[a] = floor_div(s.origin[a], k);
        c.extent[a] = floor_div(s.origin[a] + s.extent[a] - 1, k) - c.origin[a] + 1;
    }

    std::vector<std::int64_t> idx(static_cast<std::size_t>(s.dim));
    std::vector<std::int64_t> cidx(static_cast<std::size_t>(s.dim));
    std::vector<std::uint64_t> out;
    out.reserve(s.cells.size());
    for (std::uint64_t flat : s.cells) {
        s.unflatten(flat, idx);
        for (int a = 0; a < s.dim; ++a) cidx[a] = floor_div(s.origin[a] + idx[a], k) - c.origin[a];
        out.push_back(c.flatten(cidx));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    c.cells = std::move(out);
    c.validate();
    return c;
}

GridSet restrict_to_sphere(const GridSet& s, std::span<const double> center, double radius) {
    s.validate();
    if (static_cast<int>(center.size()) != s.dim)
        throw precondition_error("restrict_to_sphere: center dimension mismatch");
    if (radius <= 0.0) throw precondition_error("restrict_to_sphere: radius must be positive");
    GridSet out = s;
    out.cells.clear();
    out.filtered = true;
    const double diam = s.cell_diameter();
    std::vector<double> c(static_cast<std::size_t>(s.dim));
    for (std::uint64_t flat : s.cells) {
        s.cell_center(flat, c);
        double r2 = 0.0;
        for (int a = 0; a < s.dim; ++a) {
            const double dx = c[a] - center[a];
            r2 += dx * dx;
        }
        if (std::fabs(std::sqrt(r2) - radius) <= diam) out.cells.push_back(flat);
    }
    return out;
}

double occupied_fraction(const GridSet& s) {
    s.validate();
    if (s.cells.empty()) return 0.0;
    std::vector<std::int64_t> lo(static_cast<std::size_t>(s.dim), std::numeric_limits<std::int64_t>::max());
    std::vector<std::int64_t> hi(static_cast<std::size_t>(s.dim), std::numeric_limits<std::int64_t>::min());
    std::vector<std::int64_t> idx(static_cast<std::size_t>(s.dim));
    for (std::uint64_t flat : s.cells) {
        s.unflatten(flat, idx);
        for (int a = 0; a < s.dim; ++a) {
            lo[a] = std::min(lo[a], idx[a]);
            hi[a] = std::max(hi[a], idx[a]);
        }
    }
    double box = 1.0;
    for (int a = 0; a < s.dim; ++a) box *= static_cast<double>(hi[a] - lo[a] + 1);
    return static_cast<double>(s.count()) / box;
}

}  // namespace fraclab
