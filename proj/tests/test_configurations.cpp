#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/simplex.hpp"
#include "test_util.hpp"

using namespace fraclab;
using namespace testutil;

namespace {

// random rotation (or reflection) via Gram-Schmidt on a gaussian matrix
std::vector<std::vector<double>> random_orthogonal(Rng& rng, int d) {
    std::vector<std::vector<double>> q(static_cast<std::size_t>(d),
                                       std::vector<double>(static_cast<std::size_t>(d)));
    for (auto& row : q)
        for (auto& x : row) x = rng.normal();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < i; ++j) {
            double dot = 0.0;
            for (int a = 0; a < d; ++a) dot += q[i][a] * q[j][a];
            for (int a = 0; a < d; ++a) q[i][a] -= dot * q[j][a];
        }
        double nrm = 0.0;
        for (int a = 0; a < d; ++a) nrm += q[i][a] * q[i][a];
        nrm = std::sqrt(nrm);
        for (int a = 0; a < d; ++a) q[i][a] /= nrm;
    }
    return q;
}

std::vector<std::vector<double>> apply_isometry(const std::vector<std::vector<double>>& pts,
                                                const std::vector<std::vector<double>>& q,
                                                const std::vector<double>& shift) {
    std::vector<std::vector<double>> out;
    for (const auto& p : pts) {
        std::vector<double> y(p.size(), 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t a = 0; a < p.size(); ++a) y[i] += q[i][a] * p[a];
            y[i] += shift[i];
        }
        out.push_back(std::move(y));
    }
    return out;
}

}  // namespace

TEST_CASE("congruence vector: right triangle in pair order") {
    const std::vector<std::vector<double>> t = {{0, 0}, {1, 0}, {0, 1}};
    const auto v = congruence_vector(t);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == doctest::Approx(1.0));              // (1,2)
    CHECK(v[1] == doctest::Approx(1.0));              // (1,3)
    CHECK(v[2] == doctest::Approx(std::numbers::sqrt2));  // (2,3)
}

TEST_CASE("congruence vector: isometry invariance") {
    Rng rng(71);
    for (int trial = 0; trial < 2000; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        std::vector<std::vector<double>> pts;
        for (int i = 0; i <= k; ++i) {
            std::vector<double> p(static_cast<std::size_t>(d));
            for (auto& x : p) x = rng.uniform() * 2.0 - 1.0;
            pts.push_back(std::move(p));
        }
        const auto q = random_orthogonal(rng, d);
        std::vector<double> shift(static_cast<std::size_t>(d));
        for (auto& x : shift) x = rng.uniform() * 4.0 - 2.0;
        const auto moved = apply_isometry(pts, q, shift);
        const auto v1 = congruence_vector(pts);
        const auto v2 = congruence_vector(moved);
        for (std::size_t i = 0; i < v1.size(); ++i) CHECK(std::fabs(v1[i] - v2[i]) <= 1e-9);
        CHECK(congruent_check(pts, moved, 1e-9));
    }
}

TEST_CASE("congruence: dilation is not a congruence, reflection is") {
    const std::vector<std::vector<double>> t = {{0, 0}, {0.4, 0}, {0.1, 0.5}};
    std::vector<std::vector<double>> doubled;
    for (const auto& p : t) doubled.push_back({2 * p[0], 2 * p[1]});
    CHECK_FALSE(congruent_check(t, doubled, 1e-9));

    std::vector<std::vector<double>> reflected;
    for (const auto& p : t) reflected.push_back({-p[0], p[1]});
    CHECK(congruent_check(t, reflected, 1e-9));
}

TEST_CASE("sphere identity: unit circle angles") {
    const std::vector<double> z = {0.0, 0.0};
    for (double theta : {std::numbers::pi / 3, std::numbers::pi / 2, std::numbers::pi}) {
        const std::vector<std::vector<double>> pts = {{1.0, 0.0}, {std::cos(theta), std::sin(theta)}};
        const auto direct = congruence_vector(pts);
        const auto via_identity = congruence_vector_on_sphere(pts, z, 1.0);
        CHECK(std::fabs(direct[0] - via_identity[0]) <= 1e-9);
        CHECK(direct[0] == doctest::Approx(std::sqrt(2.0 - 2.0 * std::cos(theta))));
    }
}

TEST_CASE("sphere identity: random spherical tuples agree to 1e-9") {
    Rng rng(72);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 2 + static_cast<int>(rng.below(2));
        const double t = 0.5 + rng.uniform() * 2.0;
        std::vector<double> z(static_cast<std::size_t>(d));
        for (auto& x : z) x = rng.uniform() - 0.5;
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < d; ++i) {
            std::vector<double> p(static_cast<std::size_t>(d));
            double nrm = 0.0;
            for (auto& x : p) {
                x = rng.normal();
                nrm += x * x;
            }
            nrm = std::sqrt(nrm);
            for (std::size_t a = 0; a < p.size(); ++a) p[a] = z[a] + t * p[a] / nrm;
            pts.push_back(std::move(p));
        }
        const auto direct = congruence_vector(pts);
        const auto via_identity = congruence_vector_on_sphere(pts, z, t);
        for (std::size_t i = 0; i < direct.size(); ++i) CHECK(std::fabs(direct[i] - via_identity[i]) <= 1e-9);
    }
}

TEST_CASE("simplex spectrum: a single cell has one configuration") {
    GridSet one;
    one.dim = 2;
    one.resolution = 64;
    one.origin = {3, 9};
    one.extent = {1, 1};
    one.cells = {0};
    const SimplexSpectrum sp = simplex_spectrum(one, 2, 2000, 8, 5);
    CHECK(sp.occupied_bins == 1);
}

TEST_CASE("simplex spectrum: circle distances fill the 1-D range") {
    const GridSet circle = make_sphere_subset({2, 1.0, std::nullopt}, 128);
    const SimplexSpectrum sp = simplex_spectrum(circle, 1, 200000, 64, 9);
    CHECK(sp.reachable_bins == 64);
    CHECK(sp.reachable_fraction >= 0.95);
}

TEST_CASE("simplex spectrum: reproducible bit for bit and monotone in samples") {
    const GridSet circle = make_sphere_subset({2, 1.0, std::nullopt}, 64);
    const SimplexSpectrum a = simplex_spectrum(circle, 2, 5000, 12, 31);
    const SimplexSpectrum b = simplex_spectrum(circle, 2, 5000, 12, 31);
    CHECK(a == b);
    const SimplexSpectrum c = simplex_spectrum(circle, 2, 10000, 12, 31);
    CHECK(c.occupied_bins >= a.occupied_bins);
    // the first 5000 samples are a prefix of the longer run
    std::set<std::uint64_t> big(c.bins.begin(), c.bins.end());
    for (std::uint64_t id : a.bins) CHECK(big.count(id) == 1);
}

TEST_CASE("simplex spectrum: circle triples against the exhaustive coarse oracle") {
    const GridSet circle = make_sphere_subset({2, 1.0, std::nullopt}, 64);
    const std::int64_t m_bins = 16;
    const SimplexSpectrum sp = simplex_spectrum(circle, 2, 2000000, m_bins, 11);

    // exhaustive oracle over unordered triples with permutation closure
    const std::size_t n = circle.count();
    std::vector<double> cx(n), cy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = circle.cell_center(circle.cells[i]);
        cx[i] = c[0];
        cy[i] = c[1];
    }
    const double scale = static_cast<double>(m_bins) / sp.diameter;
    std::vector<std::vector<std::int8_t>> pair_bin(n, std::vector<std::int8_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto b = static_cast<std::int64_t>(std::hypot(cx[i] - cx[j], cy[i] - cy[j]) * scale);
            pair_bin[i][j] = static_cast<std::int8_t>(std::min(b, m_bins - 1));
        }
    std::vector<std::uint8_t> oracle(static_cast<std::size_t>(m_bins * m_bins * m_bins), 0);
    auto mark = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
        oracle[static_cast<std::size_t>((a * m_bins + b) * m_bins + c)] = 1;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pbi = pair_bin[i];
        for (std::size_t j = i; j < n; ++j) {
            const std::int64_t a = pbi[j];
            const auto& pbj = pair_bin[j];
            for (std::size_t l = j; l < n; ++l) {
                const std::int64_t b = pbi[l], c = pbj[l];
                mark(a, b, c);
                mark(a, c, b);
                mark(b, a, c);
                mark(b, c, a);
                mark(c, a, b);
                mark(c, b, a);
            }
        }
    }
    std::uint64_t oracle_count = 0;
    for (std::uint8_t v : oracle) oracle_count += v;

    const double occ_sampled = static_cast<double>(sp.occupied_bins) / static_cast<double>(sp.reachable_bins);
    const double occ_oracle = static_cast<double>(oracle_count) / static_cast<double>(sp.reachable_bins);
    CHECK(std::fabs(occ_sampled - occ_oracle) <= 0.05);
    CHECK(occ_sampled >= 0.5);
    // every sampled bin is an oracle bin
    for (std::uint64_t id : sp.bins) CHECK(oracle[id] == 1);
}

TEST_CASE("simplex spectrum: preconditions") {
    const GridSet circle = make_sphere_subset({2, 1.0, std::nullopt}, 64);
    CHECK_THROWS_AS(simplex_spectrum(circle, 3, 10000, 8, 1), precondition_error);  // k > d
    CHECK_THROWS_AS(simplex_spectrum(circle, 2, 100, 8, 1), precondition_error);    // too few samples
}
