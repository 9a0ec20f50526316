#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclab/directions.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/projection.hpp"
#include "fraclab/rng.hpp"
#include "test_util.hpp"

using namespace fraclab;
using namespace testutil;

namespace {
WeightedMeasure unit_square_measure(std::int64_t n) {
    const GridSet full = make_full_interval(n);
    return uniform_measure(make_product({full, full}));
}
}  // namespace

TEST_CASE("project: coordinate projection of the square is uniform") {
    const std::int64_t n = 32;
    const WeightedMeasure m = unit_square_measure(n);
    const double y[2] = {1.0, 0.0};
    const WeightedMeasure nu = project_measure(m, y);
    CHECK(nu.support.count() == static_cast<std::size_t>(n));
    for (double w : nu.weights) CHECK(std::fabs(w - 1.0 / static_cast<double>(n)) <= 1e-9);
}

TEST_CASE("project: diagonal projection of the square is triangular") {
    const std::int64_t n = 32;
    const WeightedMeasure m = unit_square_measure(n);
    const double y[2] = {1.0, 1.0};
    const WeightedMeasure nu = project_measure(m, y);
    CHECK(std::fabs(nu.total_mass() - 1.0) <= 1e-12);
    const auto& w = nu.weights;
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::fabs(w[i] - w[w.size() - 1 - i]) <= 1e-9);
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
    const double peak_pos = (static_cast<double>(nu.support.origin[0]) + static_cast<double>(peak) + 0.5) /
                            static_cast<double>(n);
    CHECK(std::fabs(peak_pos - 1.0) <= 2.0 / static_cast<double>(n));
}

TEST_CASE("project: mass conserved for random measures and vectors") {
    Rng rng(51);
    for (int trial = 0; trial < 15; ++trial) {
        const int dim = 2 + static_cast<int>(rng.below(2));
        const WeightedMeasure m = random_measure(rng, random_set(rng, dim, 32, 80));
        std::vector<double> y(static_cast<std::size_t>(dim));
        for (auto& v : y) v = (rng.uniform() - 0.5) * 2.0;
        const WeightedMeasure nu = project_measure(m, y);
        CHECK(std::fabs(nu.total_mass() - 1.0) <= 1e-12);
    }
}

TEST_CASE("project: zero vector degenerates to an atom at 0") {
    const WeightedMeasure m = unit_square_measure(16);
    const double y[2] = {0.0, 0.0};
    const WeightedMeasure nu = project_measure(m, y);
    CHECK(nu.support.count() == 1);
    CHECK(nu.weights[0] == doctest::Approx(1.0));
    CHECK(nu.support.origin[0] + static_cast<std::int64_t>(nu.support.cells[0]) == 0);
}

TEST_CASE("multi-project: k = 1 reduces to project_measure") {
    Rng rng(52);
    const WeightedMeasure m = random_measure(rng, random_set(rng, 2, 32, 60));
    const std::vector<double> y = {0.7, -0.4};
    const WeightedMeasure a = project_measure(m, y);
    const WeightedMeasure b = multi_project(m, {y});
    CHECK(a.support == b.support);
    for (std::size_t i = 0; i < a.weights.size(); ++i) CHECK(a.weights[i] == b.weights[i]);
}

TEST_CASE("multi-project: standard basis reproduces the measure") {
    Rng rng(53);
    const WeightedMeasure m = random_measure(rng, random_set(rng, 2, 24, 50));
    const WeightedMeasure out = multi_project(m, {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(out.support.count() == m.support.count());
    // same absolute cells, same masses
    for (std::size_t i = 0; i < out.support.cells.size(); ++i) {
        const auto oi = out.support.cell_index(out.support.cells[i]);
        const auto mi = m.support.cell_index(m.support.cells[i]);
        for (int a = 0; a < 2; ++a)
            CHECK(out.support.origin[a] + oi[a] == m.support.origin[a] + mi[a]);
        CHECK(std::fabs(out.weights[i] - m.weights[i]) <= 1e-12);
    }
}

TEST_CASE("multi-project: orthonormal pair maps the circle onto itself") {
    const WeightedMeasure circle = uniform_measure(make_sphere_subset({2, 1.0, std::nullopt}, 128));
    const double r = std::numbers::sqrt2 / 2.0;
    const WeightedMeasure out = multi_project(circle, {{r, r}, {-r, r}});
    CHECK(std::fabs(out.total_mass() - 1.0) <= 1e-12);
    const double spread = 4.0 / 128.0;
    std::size_t near = 0;
    std::vector<double> c(2);
    for (std::uint64_t flat : out.support.cells) {
        out.support.cell_center(flat, c);
        if (std::fabs(std::hypot(c[0], c[1]) - 1.0) <= spread) ++near;
    }
    CHECK(static_cast<double>(near) / static_cast<double>(out.support.count()) >= 0.95);
    // covers at least half of the annulus band it lands in
    const GridSet band = make_sphere_subset({2, 1.0, std::nullopt}, 128);
    CHECK(static_cast<double>(out.support.count()) >= 0.5 * static_cast<double>(band.count()));
}

TEST_CASE("multi-project: repeated vector concentrates on the diagonal") {
    Rng rng(54);
    const WeightedMeasure m = random_measure(rng, random_set(rng, 2, 32, 60));
    const std::vector<double> y = {0.8, 0.3};
    const WeightedMeasure out = multi_project(m, {y, y});
    const double spread = (std::fabs(y[0]) + std::fabs(y[1]) + 2.0) / 32.0;
    std::vector<double> c(2);
    for (std::uint64_t flat : out.support.cells) {
        out.support.cell_center(flat, c);
        CHECK(std::fabs(c[0] - c[1]) <= spread);
    }
}

TEST_CASE("project: scaling equivariance at a base power") {
    const GridSet a = make_cantor({3, {0, 2}, 5});
    const WeightedMeasure m = uniform_measure(make_product({a, a}));
    const std::vector<double> y = {0.41, 0.23};
    const std::vector<double> cy = {3.0 * y[0], 3.0 * y[1]};
    const WeightedMeasure nu = project_measure(m, y);
    const WeightedMeasure nu3 = project_measure(m, cy);
    // grouping the dilated pushforward by 3 recovers nu cell by cell
    for (std::size_t i = 0; i < nu.support.cells.size(); ++i) {
        const std::int64_t p = nu.support.origin[0] + static_cast<std::int64_t>(nu.support.cells[i]);
        double grouped = 0.0;
        for (std::size_t j = 0; j < nu3.support.cells.size(); ++j) {
            const std::int64_t q = nu3.support.origin[0] + static_cast<std::int64_t>(nu3.support.cells[j]);
            const std::int64_t fd = q >= 0 ? q / 3 : (q - 2) / 3;
            if (fd == p) grouped += nu3.weights[j];
        }
        CHECK(std::fabs(grouped - nu.weights[i]) <= 1e-12);
    }
}

TEST_CASE("tube mass: axis strip of the unit square") {
    const WeightedMeasure m = unit_square_measure(64);
    const double xi[2] = {1.0, 0.0};
    const double mass = tube_mass(m, xi, 0.125);
    CHECK(std::fabs(mass - 0.125) <= 2.0 / 64.0);
}

TEST_CASE("tube mass: saturates when delta covers the support") {
    Rng rng(55);
    const WeightedMeasure m = random_measure(rng, random_set(rng, 2, 32, 60));
    const double xi[2] = {1.0, 1.0};
    CHECK(tube_mass(m, xi, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("tube mass: monotone in delta and guarded below 1/N") {
    const WeightedMeasure m = unit_square_measure(32);
    const double xi[2] = {0.6, 0.8};
    double prev = 0.0;
    for (double delta : {1.0 / 32, 2.0 / 32, 4.0 / 32, 8.0 / 32, 16.0 / 32}) {
        const double mass = tube_mass(m, xi, delta);
        CHECK(mass >= prev - 1e-12);
        prev = mass;
    }
    CHECK_THROWS_AS(tube_mass(m, xi, 1.0 / 64), precondition_error);
}

TEST_CASE("tube mass: product cantor axis tube is exactly self-similar") {
    const int depth = 7;
    const GridSet a = make_cantor({3, {0, 2}, depth});
    const WeightedMeasure m = uniform_measure(make_product({a, a}));
    const double xi[2] = {1.0, 0.0};
    for (int j = 1; j <= 4; ++j) {
        const double mass = tube_mass(m, xi, std::pow(3.0, -j));
        CHECK(mass == doctest::Approx(std::pow(2.0, -j)).epsilon(1e-12));
    }
}

TEST_CASE("tube profile: product cantor matches the product-set exponent") {
    const GridSet a = make_cantor({3, {0, 2}, 7});
    const WeightedMeasure m = uniform_measure(make_product({a, a}));
    const double s_f = frostman_fit(m).exponent;
    std::vector<double> deltas;
    for (int i = 0; i < 9; ++i)
        deltas.push_back(std::pow(3.0, -2.0 - 4.0 * static_cast<double>(i) / 8.0));
    const TubeProfile p = tube_profile(m, unit_directions(2, 64), deltas, s_f);
    const double s_a = std::log(2.0) / std::log(3.0);
    CHECK(std::fabs(p.exponent - s_a) <= 0.1);
    CHECK(std::fabs(p.l_f - s_a) <= 0.1);
}

TEST_CASE("tube profile: full square has the generic profile") {
    const WeightedMeasure m = unit_square_measure(128);
    std::vector<double> deltas = {0.25, 0.158, 0.1, 0.063, 0.04, 0.025, 0.016};
    const TubeProfile p = tube_profile(m, unit_directions(2, 32), deltas, 2.0);
    CHECK(std::fabs(p.exponent - 1.0) <= 0.05);
    CHECK(std::fabs(p.l_f - 1.0) <= 0.05);
}

TEST_CASE("tube profile: atom at the origin has exponent 0") {
    GridSet s;
    s.dim = 2;
    s.resolution = 64;
    s.origin = {0, 0};
    s.extent = {1, 1};
    s.cells = {0};
    const WeightedMeasure atom = uniform_measure(s);
    std::vector<double> deltas = {0.25, 0.18, 0.125, 0.09, 0.0625, 0.045};
    const TubeProfile p = tube_profile(atom, unit_directions(2, 16), deltas, 0.0);
    CHECK(p.exponent == 0.0);
}

TEST_CASE("pinned distances: single cell, circle pin, subset monotone") {
    GridSet one;
    one.dim = 2;
    one.resolution = 32;
    one.origin = {10, 4};
    one.extent = {1, 1};
    one.cells = {0};
    const double y[2] = {0.1, 0.1};
    const GridSet d1 = pinned_distances(one, y);
    CHECK(d1.count() <= 3);  // distance spread over one 2-D cell covers <= 3 output cells

    const GridSet circle = make_sphere_subset({2, 1.0, std::nullopt}, 256);
    const double pin[2] = {1.0, 0.0};
    const GridSet dist = pinned_distances(circle, pin);
    CHECK(occupied_fraction(dist) >= 0.99);

    Rng rng(56);
    const GridSet big = random_set(rng, 2, 32, 80);
    GridSet small = big;
    small.cells.resize(big.count() / 2 + 1);
    const auto dist_small = abs_cells(pinned_distances(small, y));
    const auto dist_big = abs_cells(pinned_distances(big, y));
    for (std::int64_t p : dist_small) CHECK(dist_big.count(p) == 1);
}

TEST_CASE("star-like score: circle small, square large, ray direction-dependent") {
    std::vector<double> deltas = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    const auto dirs = unit_directions(2, 32);

    const GridSet circle = make_sphere_subset({2, 1.0, std::nullopt}, 256);
    CHECK(star_like_score(circle, deltas, dirs) <= 8.0);

    const GridSet full = make_full_interval(64);
    const GridSet square = make_product({full, full});
    CHECK(star_like_score(square, deltas, dirs) >= 0.5 / deltas.back());

    // a ray of cells from the origin along (1,1)
    GridSet ray;
    ray.dim = 2;
    ray.resolution = 64;
    ray.origin = {0, 0};
    ray.extent = {64, 64};
    for (std::int64_t i = 0; i < 64; ++i) ray.cells.push_back(ray.flatten(std::vector<std::int64_t>{i, i}));
    std::sort(ray.cells.begin(), ray.cells.end());
    const double aligned = star_like_score(ray, deltas, {{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}});
    CHECK(aligned >= 0.5 / deltas.back());
    const double transverse = star_like_score(ray, deltas, {{-std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}});
    CHECK(transverse <= 4.0);
}
