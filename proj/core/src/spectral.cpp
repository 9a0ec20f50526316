#include "fraclab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/numeric.hpp"

namespace fraclab {

namespace {

void check_alias_guard(const WeightedMeasure& m, std::span<const double> freqs) {
    const double guard = static_cast<double>(m.resolution()) / 4.0;
    for (double t : freqs) {
        if (t <= 0.0) throw precondition_error("decay window: frequencies must be positive");
        if (t >= guard)
            throw precondition_error("aliasing: frequency " + std::to_string(t) +
                                     " is not below the N/4 guard " + std::to_string(guard));
    }
}

void check_window_shape(std::span<const double> freqs) {
    if (freqs.size() < 8) throw precondition_error("decay window: need >= 8 frequency magnitudes");
    const auto [mn, mx] = std::minmax_element(freqs.begin(), freqs.end());
    if (*mx < 8.0 * *mn) throw precondition_error("decay window: must span >= 3 octaves");
}

}  // namespace

namespace {

// Row-major cell centers, computed once per transform batch.
std::vector<double> flat_centers(const GridSet& s) {
    const auto d = static_cast<std::size_t>(s.dim);
    std::vector<double> out(s.cells.size() * d);
    for (std::size_t i = 0; i < s.cells.size(); ++i)
        s.cell_center(s.cells[i], std::span<double>(out.data() + i * d, d));
    return out;
}

std::complex<double> transform_at(std::span<const double> centers, int dim, std::span<const double> weights,
                                  std::span<const double> xi) {
    const auto d = static_cast<std::size_t>(dim);
    const std::size_t n = weights.size();
    // phases in units of pi; the cospi/sinpi symmetry plus the balanced
    // summation keeps structural cancellations exact
    auto phase = [&](std::size_t i) {
        double dot = 0.0;
        const double* c = centers.data() + i * d;
        for (std::size_t a = 0; a < d; ++a) dot += c[a] * xi[a];
        return 2.0 * dot;
    };
    const double re = pairwise_sum(0, n, [&](std::size_t i) { return weights[i] * cospi(phase(i)); });
    const double im = pairwise_sum(0, n, [&](std::size_t i) { return -weights[i] * sinpi(phase(i)); });
    return {re, im};
}

}  // namespace

std::complex<double> measure_fourier(const WeightedMeasure& m, std::span<const double> xi) {
    const GridSet& s = m.support;
    if (static_cast<int>(xi.size()) != s.dim)
        throw precondition_error("measure_fourier: frequency dimension mismatch");
    return transform_at(flat_centers(s), s.dim, m.weights, xi);
}

std::vector<std::pair<double, double>> decay_samples(const WeightedMeasure& m,
                                                     std::span<const double> freqs,
                                                     const std::vector<std::vector<double>>& directions) {
    m.validate();
    if (directions.empty()) throw precondition_error("decay_fit: need at least one direction");
    for (const auto& w : directions)
        if (static_cast<int>(w.size()) != m.dim()) throw precondition_error("decay_fit: direction dimension mismatch");
    check_window_shape(freqs);
    check_alias_guard(m, freqs);

    const std::vector<double> centers = flat_centers(m.support);
    std::vector<std::pair<double, double>> rows;
    rows.reserve(freqs.size());
    std::vector<double> xi(static_cast<std::size_t>(m.dim()));
    for (double t : freqs) {
        double sup = 0.0;
        for (const auto& w : directions) {
            for (std::size_t a = 0; a < xi.size(); ++a) xi[a] = t * w[a];
            sup = std::max(sup, std::abs(transform_at(centers, m.dim(), m.weights, xi)));
        }
        rows.emplace_back(t, sup);
    }
    return rows;
}

DecayFit decay_fit(const WeightedMeasure& m, std::span<const double> freqs,
                   const std::vector<std::vector<double>>& directions) {
    const auto rows = decay_samples(m, freqs, directions);
    std::vector<double> ts, vs;
    ts.reserve(rows.size());
    vs.reserve(rows.size());
    for (const auto& [t, v] : rows) {
        ts.push_back(t);
        vs.push_back(v);
    }
    return fit_decay(ts, vs);
}

double energy_integral(const WeightedMeasure& m, double s, bool exclude_diagonal) {
    m.validate();
    if (s < 0.0) throw precondition_error("energy_integral: exponent must be >= 0");
    const GridSet& g = m.support;
    const int d = g.dim;
    const double floor_dist = 1.0 / static_cast<double>(g.resolution);
    const std::size_t n = g.cells.size();

    std::vector<double> centers(n * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i)
        g.cell_center(g.cells[i], std::span<double>(centers.data() + i * static_cast<std::size_t>(d),
                                                    static_cast<std::size_t>(d)));

    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        const double* ci = centers.data() + i * static_cast<std::size_t>(d);
        for (std::size_t j = 0; j < n; ++j) {
            if (exclude_diagonal && i == j) continue;
            const double* cj = centers.data() + j * static_cast<std::size_t>(d);
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dx = ci[a] - cj[a];
                r2 += dx * dx;
            }
            const double r = std::max(std::sqrt(r2), floor_dist);
            acc.add(m.weights[i] * m.weights[j] * std::pow(r, -s));
        }
    }
    return acc.value();
}

DecayFit sphere_averaged_decay(const WeightedMeasure& m_e, const WeightedMeasure& m_f,
                               std::span<const double> t_grid) {
    m_e.validate();
    m_f.validate();
    if (m_e.dim() != m_f.dim()) throw precondition_error("sphere_averaged_decay: ambient dimensions differ");
    check_window_shape(t_grid);

    // anti-aliasing on the E-grid: |t*y| must stay below N_E/4
    double max_norm = 0.0;
    std::vector<double> y(static_cast<std::size_t>(m_f.dim()));
    for (std::uint64_t flat : m_f.support.cells) {
        m_f.support.cell_center(flat, y);
        double r2 = 0.0;
        for (double v : y) r2 += v * v;
        max_norm = std::max(max_norm, std::sqrt(r2));
    }
    std::vector<double> scaled(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) scaled[i] = t_grid[i] * std::max(max_norm, 1e-300);
    check_alias_guard(m_e, scaled);

    const std::vector<double> e_centers = flat_centers(m_e.support);
    const std::vector<double> f_centers = flat_centers(m_f.support);
    const auto d = static_cast<std::size_t>(m_e.dim());
    std::vector<double> ts, gs;
    std::vector<double> xi(d);
    for (double t : t_grid) {
        CompensatedSum g_t;
        for (std::size_t j = 0; j < m_f.support.cells.size(); ++j) {
            for (std::size_t a = 0; a < d; ++a) xi[a] = t * f_centers[j * d + a];
            const double mag = std::abs(transform_at(e_centers, m_e.dim(), m_e.weights, xi));
            g_t.add(m_f.weights[j] * mag * mag);
        }
        ts.push_back(t);
        gs.push_back(std::max(g_t.value(), 1e-300));
    }
    return fit_decay(ts, gs);
}

}  // namespace fraclab
