#include "fraclab/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclab/errors.hpp"
#include "fraclab/fit.hpp"
#include "fraclab/numeric.hpp"

namespace fraclab {

namespace {

constexpr double kGeomTol = 1e-9;
constexpr double kTubeLength = 10.0;

double norm(std::span<const double> v) {
    double r2 = 0.0;
    for (double x : v) r2 += x * x;
    return std::sqrt(r2);
}

// Range of x.y over a cell with absolute lower corner abs (units 1/N).
std::pair<double, double> dot_range(std::span<const std::int64_t> abs, std::span<const double> y, double n) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t a = 0; a < y.size(); ++a) {
        const double c0 = static_cast<double>(abs[a]) / n * y[a];
        const double c1 = static_cast<double>(abs[a] + 1) / n * y[a];
        lo += std::min(c0, c1);
        hi += std::max(c0, c1);
    }
    return {lo, hi};
}

}  // namespace

WeightedMeasure multi_project(const WeightedMeasure& m, const std::vector<std::vector<double>>& ys) {
    m.validate();
    const GridSet& e = m.support;
    const int d = e.dim;
    const int k = static_cast<int>(ys.size());
    if (k < 1) throw precondition_error("multi_project: need at least one vector");
    if (k > d) throw precondition_error("multi_project: k must satisfy 1 <= k <= d");
    for (const auto& y : ys) {
        if (static_cast<int>(y.size()) != d) throw precondition_error("multi_project: vector dimension mismatch");
        if (norm(y) > 2.0 + kGeomTol) throw precondition_error("multi_project: |y| must be <= 2");
    }

    const double n = static_cast<double>(e.resolution);
    const std::size_t n_cells = e.cells.size();

    // first pass: output bounding box per axis, in output cells
    std::vector<std::int64_t> out_lo(static_cast<std::size_t>(k), std::numeric_limits<std::int64_t>::max());
    std::vector<std::int64_t> out_hi(static_cast<std::size_t>(k), std::numeric_limits<std::int64_t>::min());
    std::vector<std::int64_t> idx(static_cast<std::size_t>(d));
    std::vector<std::int64_t> abs(static_cast<std::size_t>(d));
    auto cell_ranges = [&](std::uint64_t flat, std::vector<std::pair<double, double>>& ranges) {
        e.unflatten(flat, idx);
        for (int a = 0; a < d; ++a) abs[a] = e.origin[a] + idx[a];
        for (int axis = 0; axis < k; ++axis) ranges[static_cast<std::size_t>(axis)] = dot_range(abs, ys[static_cast<std::size_t>(axis)], n);
    };

    std::vector<std::pair<double, double>> ranges(static_cast<std::size_t>(k));
    for (std::uint64_t flat : e.cells) {
        cell_ranges(flat, ranges);
        for (int axis = 0; axis < k; ++axis) {
            const auto [lo, hi] = ranges[static_cast<std::size_t>(axis)];
            const auto jlo = static_cast<std::int64_t>(std::floor(lo * n + kGeomTol));
            auto jhi = static_cast<std::int64_t>(std::floor(hi * n - kGeomTol));
            if (jhi < jlo) jhi = jlo;
            out_lo[static_cast<std::size_t>(axis)] = std::min(out_lo[static_cast<std::size_t>(axis)], jlo);
            out_hi[static_cast<std::size_t>(axis)] = std::max(out_hi[static_cast<std::size_t>(axis)], jhi);
        }
    }

    GridSet og;
    og.dim = k;
    og.resolution = e.resolution;
    og.origin.resize(static_cast<std::size_t>(k));
    og.extent.resize(static_cast<std::size_t>(k));
    __int128 total = 1;
    for (int axis = 0; axis < k; ++axis) {
        og.origin[static_cast<std::size_t>(axis)] = out_lo[static_cast<std::size_t>(axis)];
        og.extent[static_cast<std::size_t>(axis)] = out_hi[static_cast<std::size_t>(axis)] - out_lo[static_cast<std::size_t>(axis)] + 1;
        total *= og.extent[static_cast<std::size_t>(axis)];
    }
    if (total > (__int128{1} << 62)) throw resource_error("multi_project: output box overflows");
    detail::check_budget(static_cast<std::uint64_t>(total), "multi_project");

    std::vector<double> mass(static_cast<std::size_t>(total), 0.0);

    // per-axis covered cells and overlap fractions
    std::vector<std::vector<std::pair<std::int64_t, double>>> axis_split(static_cast<std::size_t>(k));
    std::vector<std::size_t> pos(static_cast<std::size_t>(k));
    std::vector<std::int64_t> ocell(static_cast<std::size_t>(k));
    for (std::size_t ci = 0; ci < n_cells; ++ci) {
        cell_ranges(e.cells[ci], ranges);
        for (int axis = 0; axis < k; ++axis) {
            auto& split = axis_split[static_cast<std::size_t>(axis)];
            split.clear();
            const auto [lo, hi] = ranges[static_cast<std::size_t>(axis)];
            const double lo_n = lo * n, hi_n = hi * n;
            const auto jlo = static_cast<std::int64_t>(std::floor(lo_n + kGeomTol));
            auto jhi = static_cast<std::int64_t>(std::floor(hi_n - kGeomTol));
            if (jhi < jlo) jhi = jlo;
            const double len = hi_n - lo_n;
            if (len <= kGeomTol) {
                split.emplace_back(jlo, 1.0);
            } else {
                for (std::int64_t j = jlo; j <= jhi; ++j) {
                    const double a = std::max(lo_n, static_cast<double>(j));
                    const double b = std::min(hi_n, static_cast<double>(j + 1));
                    split.emplace_back(j, std::max(0.0, b - a) / len);
                }
            }
        }
        // tensor split across axes
        std::fill(pos.begin(), pos.end(), 0);
        const double w = m.weights[ci];
        while (true) {
            double frac = w;
            for (int axis = 0; axis < k; ++axis) {
                const auto& [j, f] = axis_split[static_cast<std::size_t>(axis)][pos[static_cast<std::size_t>(axis)]];
                ocell[static_cast<std::size_t>(axis)] = j - og.origin[static_cast<std::size_t>(axis)];
                frac *= f;
            }
            if (frac > 0.0) {
                std::uint64_t flat = 0;
                for (int axis = 0; axis < k; ++axis)
                    flat = flat * static_cast<std::uint64_t>(og.extent[static_cast<std::size_t>(axis)]) +
                           static_cast<std::uint64_t>(ocell[static_cast<std::size_t>(axis)]);
                mass[flat] += frac;
            }
            int axis = k;
            bool done = false;
            while (axis > 0) {
                --axis;
                if (++pos[static_cast<std::size_t>(axis)] < axis_split[static_cast<std::size_t>(axis)].size()) break;
                pos[static_cast<std::size_t>(axis)] = 0;
                if (axis == 0) done = true;
            }
            if (done) break;
        }
    }

    WeightedMeasure out;
    out.support = std::move(og);
    for (std::size_t i = 0; i < mass.size(); ++i) {
        if (mass[i] > 0.0) {
            out.support.cells.push_back(i);
            out.weights.push_back(mass[i]);
        }
    }
    return out;
}

WeightedMeasure project_measure(const WeightedMeasure& m, std::span<const double> y) {
    if (static_cast<int>(y.size()) != m.dim()) throw precondition_error("project_measure: vector dimension mismatch");
    if (norm(y) > 2.0 + kGeomTol) throw precondition_error("project_measure: |y| must be <= 2");
    return multi_project(m, {std::vector<double>(y.begin(), y.end())});
}

double tube_mass(const WeightedMeasure& m, std::span<const double> xi, double delta) {
    m.validate();
    const GridSet& g = m.support;
    if (static_cast<int>(xi.size()) != g.dim) throw precondition_error("tube_mass: direction dimension mismatch");
    const double xin = norm(xi);
    if (!(xin > 0.0)) throw precondition_error("tube_mass: direction must be nonzero");
    if (delta < 1.0 / static_cast<double>(g.resolution) - kGeomTol)
        throw precondition_error("tube_mass: delta below the cell size 1/N");

    std::vector<double> u(xi.size());
    for (std::size_t a = 0; a < xi.size(); ++a) u[a] = xi[a] / xin;

    std::vector<double> c(static_cast<std::size_t>(g.dim));
    CompensatedSum acc;
    const double d2 = delta * delta;
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        g.cell_center(g.cells[i], c);
        double s = 0.0;
        for (std::size_t a = 0; a < u.size(); ++a) s += c[a] * u[a];
        s = std::clamp(s, 0.0, kTubeLength);
        double r2 = 0.0;
        for (std::size_t a = 0; a < u.size(); ++a) {
            const double dx = c[a] - s * u[a];
            r2 += dx * dx;
        }
        if (r2 <= d2) acc.add(m.weights[i]);
    }
    return acc.value();
}

TubeProfile tube_profile(const WeightedMeasure& m, const std::vector<std::vector<double>>& directions,
                         std::span<const double> deltas, double s_f) {
    m.validate();
    if (directions.size() < 16) throw precondition_error("tube_profile: need >= 16 directions");
    if (deltas.size() < 6) throw precondition_error("tube_profile: need >= 6 deltas");
    const auto [mn, mx] = std::minmax_element(deltas.begin(), deltas.end());
    if (*mx < 4.0 * *mn) throw precondition_error("tube_profile: deltas must span >= 2 octaves");

    std::vector<double> sorted(deltas.begin(), deltas.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    TubeProfile p;
    p.direction_count = static_cast<int>(directions.size());
    std::vector<double> ds, ms;
    for (double delta : sorted) {
        double best = 0.0;
        for (const auto& dir : directions) best = std::max(best, tube_mass(m, dir, delta));
        p.samples.emplace_back(delta, best);
        if (best > 0.0) {
            ds.push_back(delta);
            ms.push_back(best);
        }
    }
    if (ds.size() >= 2) {
        const LineFit lf = loglog_fit(ds, ms);
        p.exponent = std::max(0.0, lf.slope);
        p.residual = lf.residual;
    }
    p.l_f = s_f - p.exponent;
    return p;
}

GridSet pinned_distances(const GridSet& e, std::span<const double> y) {
    e.validate();
    if (e.cells.empty()) throw precondition_error("pinned_distances: empty set");
    if (static_cast<int>(y.size()) != e.dim) throw precondition_error("pinned_distances: pin dimension mismatch");

    const int d = e.dim;
    const double n = static_cast<double>(e.resolution);
    std::vector<std::int64_t> idx(static_cast<std::size_t>(d));
    std::vector<std::int64_t> out_abs;
    for (std::uint64_t flat : e.cells) {
        e.unflatten(flat, idx);
        // distance range from y to the closed cell box
        double min2 = 0.0, max2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double lo = static_cast<double>(e.origin[a] + idx[a]) / n;
            const double hi = static_cast<double>(e.origin[a] + idx[a] + 1) / n;
            const double below = lo - y[a];
            const double above = y[a] - hi;
            const double gap = std::max({below, above, 0.0});
            min2 += gap * gap;
            const double far = std::max(std::fabs(y[a] - lo), std::fabs(y[a] - hi));
            max2 += far * far;
        }
        const double rmin = std::sqrt(min2), rmax = std::sqrt(max2);
        const auto jlo = static_cast<std::int64_t>(std::floor(rmin * n + kGeomTol));
        auto jhi = static_cast<std::int64_t>(std::floor(rmax * n - kGeomTol));
        if (jhi < jlo) jhi = jlo;
        for (std::int64_t j = jlo; j <= jhi; ++j) out_abs.push_back(j);
    }
    std::sort(out_abs.begin(), out_abs.end());
    out_abs.erase(std::unique(out_abs.begin(), out_abs.end()), out_abs.end());
    detail::check_budget(out_abs.size(), "pinned_distances");

    GridSet s;
    s.dim = 1;
    s.resolution = e.resolution;
    s.origin = {out_abs.front()};
    s.extent = {out_abs.back() - out_abs.front() + 1};
    s.cells.reserve(out_abs.size());
    for (std::int64_t p : out_abs) s.cells.push_back(static_cast<std::uint64_t>(p - out_abs.front()));
    s.validate();
    return s;
}

double star_like_score(const GridSet& f, std::span<const double> deltas,
                       const std::vector<std::vector<double>>& directions) {
    f.validate();
    if (deltas.empty() || directions.empty()) throw precondition_error("star_like_score: empty ladder");

    const int d = f.dim;
    const std::size_t n_cells = f.cells.size();
    std::vector<double> centers(n_cells * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n_cells; ++i)
        f.cell_center(f.cells[i], std::span<double>(centers.data() + i * static_cast<std::size_t>(d),
                                                    static_cast<std::size_t>(d)));

    double score = 0.0;
    std::vector<std::pair<double, std::size_t>> in_tube;  // (axis parameter, cell)
    for (const auto& dir : directions) {
        for (double delta : deltas) {
            in_tube.clear();
            const double d2 = delta * delta;
            for (std::size_t i = 0; i < n_cells; ++i) {
                const double* c = centers.data() + i * static_cast<std::size_t>(d);
                double s = 0.0;
                for (int a = 0; a < d; ++a) s += c[a] * dir[static_cast<std::size_t>(a)];
                const double s_cl = std::clamp(s, 0.0, kTubeLength);
                double r2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    const double dx = c[a] - s_cl * dir[static_cast<std::size_t>(a)];
                    r2 += dx * dx;
                }
                if (r2 <= d2) in_tube.emplace_back(s, i);
            }
            if (in_tube.empty()) continue;
            std::sort(in_tube.begin(), in_tube.end());
            // greedy cover along the tube axis
            std::vector<bool> covered(in_tube.size(), false);
            int balls = 0;
            for (std::size_t i = 0; i < in_tube.size(); ++i) {
                if (covered[i]) continue;
                ++balls;
                const double* ci = centers.data() + in_tube[i].second * static_cast<std::size_t>(d);
                for (std::size_t j = i; j < in_tube.size(); ++j) {
                    if (covered[j]) continue;
                    if (in_tube[j].first - in_tube[i].first > 2.0 * delta) break;
                    const double* cj = centers.data() + in_tube[j].second * static_cast<std::size_t>(d);
                    double r2 = 0.0;
                    for (int a = 0; a < d; ++a) {
                        const double dx = ci[a] - cj[a];
                        r2 += dx * dx;
                    }
                    if (r2 <= d2) covered[j] = true;
                }
            }
            score = std::max(score, static_cast<double>(balls));
        }
    }
    return score;
}

}  // namespace fraclab
