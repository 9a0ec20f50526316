#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "fraclab/arithmetic.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/rng.hpp"
#include "test_util.hpp"

using namespace fraclab;
using namespace testutil;

namespace {
GridSet single_cell(std::int64_t n, std::int64_t abs) {
    GridSet s;
    s.dim = 1;
    s.resolution = n;
    s.origin = {abs};
    s.extent = {1};
    s.cells = {0};
    return s;
}
}  // namespace

TEST_CASE("sumset: half cells cover the unit interval") {
    const GridSet a = single_cell(2, 0);  // [0, 1/2)
    const GridSet c = sumset(a, a);
    CHECK(abs_cells(c) == std::set<std::int64_t>{0, 1});  // covers [0, 1]
}

TEST_CASE("sumset: full + full = [0,2]") {
    const GridSet full = make_full_interval(16);
    const GridSet c = sumset(full, full);
    CHECK(c.count() == 32);
    CHECK(abs_cells(c).count(0) == 1);
    CHECK(abs_cells(c).count(31) == 1);
}

TEST_CASE("sumset: middle-thirds cantor fills [0,2] at depth 12") {
    const GridSet a = make_cantor({3, {0, 2}, 12});
    const GridSet c = sumset(a, a);
    CHECK(c.count() == static_cast<std::size_t>(2 * a.resolution));

    // exhaustive digit oracle at a verifiable depth
    const GridSet a6 = make_cantor({3, {0, 2}, 6});
    CHECK(abs_cells(sumset(a6, a6)) == sumset_oracle(a6, a6));
}

TEST_CASE("sumset: resolution mismatch rejected") {
    CHECK_THROWS_AS(sumset(make_full_interval(8), make_full_interval(9)), precondition_error);
}

TEST_CASE("productset: near-identity at a unit cell") {
    const std::int64_t n = 64;
    const GridSet one = single_cell(n, n);  // the cell [1, 1 + 1/N)
    const GridSet c = productset(one, one);
    const auto cells = abs_cells(c);
    CHECK(cells.count(n) == 1);       // contains 1
    CHECK(cells.size() <= 3);         // identity up to boundary cells
    for (std::int64_t p : cells) CHECK(p >= n);
}

TEST_CASE("productset: zero cell absorbs") {
    Rng rng(3);
    const GridSet a = random_set_1d(rng, 32, 40);
    const GridSet z = single_cell(32, 0);  // [0, 1/32)
    const GridSet c = productset(a, z);
    for (std::int64_t p : abs_cells(c)) CHECK(std::fabs(static_cast<double>(p)) <= static_cast<double>(a.extent[0]) + 1);
}

TEST_CASE("productset: cantor(4,{0,3}) self-product keeps fractal occupancy") {
    const GridSet a = make_cantor({4, {0, 3}, 8});
    const GridSet c = productset(a, a);
    const double f = occupied_fraction(c);
    CHECK(f > 0.0);
    CHECK(f < 1.0);
    // monotonicity oracle: a * {fixed cell} is contained in a * a
    const GridSet fixed = single_cell(a.resolution, a.origin[0] + static_cast<std::int64_t>(a.cells.back()));
    const auto small = abs_cells(productset(a, fixed));
    const auto big = abs_cells(c);
    for (std::int64_t p : small) CHECK(big.count(p) == 1);
}

TEST_CASE("productset: supports outside the box are rejected") {
    const GridSet far = single_cell(8, 24);  // the cell [3, 3 + 1/8)
    CHECK_THROWS_AS(productset(far, far), precondition_error);
    CHECK_NOTHROW(productset(far, far, 4.0));  // configurable box
}

TEST_CASE("dilated sum: (1,1) equals the sumset") {
    const GridSet a = make_cantor({3, {0, 2}, 6});
    const double coeffs[2] = {1.0, 1.0};
    CHECK(dilated_sum(coeffs, a) == sumset(a, a));
}

TEST_CASE("dilated sum: (1,0) is the identity up to boundary cells") {
    const GridSet a = make_cantor({3, {0, 2}, 6});
    const double coeffs[2] = {1.0, 0.0};
    const GridSet c = dilated_sum(coeffs, a);
    const auto in = abs_cells(a);
    const auto out = abs_cells(c);
    for (std::int64_t p : in) CHECK(out.count(p) == 1);
    for (std::int64_t p : out) CHECK((in.count(p) == 1 || in.count(p - 1) == 1));
}

TEST_CASE("dilated sum: zero coefficients are degenerate") {
    const GridSet a = make_full_interval(8);
    const double coeffs[2] = {0.0, 0.0};
    CHECK_THROWS_AS(dilated_sum(coeffs, a), precondition_error);
}

TEST_CASE("dilated sum: high-dimension cantor probe fills at desk scale") {
    // dim log3/log4 > 2/3, coefficients sampled from the set itself
    const CantorSpec spec{4, {0, 1, 2}, 6};
    const GridSet a = make_cantor(spec);
    const auto coeffs = sample_coefficients(a, 2, 1);
    const GridSet c = dilated_sum(coeffs, a);
    CHECK(occupied_fraction(c) >= 0.99);
}

TEST_CASE("convolution: point mass shifts by half a cell") {
    Rng rng(17);
    const GridSet s = random_set_1d(rng, 32, 20);
    const WeightedMeasure m = random_measure(rng, s);
    const WeightedMeasure delta = uniform_measure(single_cell(32, 0));
    const WeightedMeasure c = convolve_sum_measures(delta, m);
    CHECK(std::fabs(c.total_mass() - 1.0) <= 1e-12);
    // every input cell's mass reappears split over the two adjacent cells
    const auto in = abs_cells(s);
    for (std::size_t i = 0; i < c.support.cells.size(); ++i) {
        const std::int64_t p = c.support.origin[0] + static_cast<std::int64_t>(c.support.cells[i]);
        CHECK((in.count(p) == 1 || in.count(p - 1) == 1));
    }
}

TEST_CASE("convolution: uniform x uniform is the symmetric triangle") {
    const std::int64_t n = 64;
    const WeightedMeasure u = uniform_measure(make_full_interval(n));
    const WeightedMeasure c = convolve_sum_measures(u, u);
    CHECK(std::fabs(c.total_mass() - 1.0) <= 1e-12);
    const auto& w = c.weights;
    const std::size_t m = w.size();
    CHECK(m == static_cast<std::size_t>(2 * n));
    for (std::size_t i = 0; i < m; ++i) CHECK(std::fabs(w[i] - w[m - 1 - i]) <= 1e-9);
    // peak at 1 (cells n-1 and n share the max)
    const double peak = *std::max_element(w.begin(), w.end());
    CHECK(w[static_cast<std::size_t>(n - 1)] == doctest::Approx(peak));
    CHECK(w[static_cast<std::size_t>(n)] == doctest::Approx(peak));
}

TEST_CASE("convolution: conserves mass and support equals the sumset") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const GridSet a = random_set_1d(rng, 64, 50);
        const GridSet b = random_set_1d(rng, 64, 50);
        const WeightedMeasure c = convolve_sum_measures(random_measure(rng, a), random_measure(rng, b));
        CHECK(std::fabs(c.total_mass() - 1.0) <= 1e-12);
        CHECK(abs_cells(c.support) == abs_cells(sumset(a, b)));
    }
}

TEST_CASE("sumset/productset: commutative and monotone") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const GridSet a = random_set_1d(rng, 48, 30);
        const GridSet b = random_set_1d(rng, 48, 30);
        CHECK(sumset(a, b) == sumset(b, a));
        CHECK(productset(a, b) == productset(b, a));

        // monotone: drop cells from a
        GridSet sub = a;
        if (sub.count() > 1) {
            sub.cells.resize(sub.count() / 2 + 1);
            const auto whole = abs_cells(sumset(a, b));
            for (std::int64_t p : abs_cells(sumset(sub, b))) CHECK(whole.count(p) == 1);
            const auto whole_p = abs_cells(productset(a, b));
            for (std::int64_t p : abs_cells(productset(sub, b))) CHECK(whole_p.count(p) == 1);
        }
    }
}

TEST_CASE("sumset: count bounds for sets in [0,1]") {
    Rng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const GridSet a = random_set_1d(rng, 64, 60);
        const GridSet b = random_set_1d(rng, 64, 60);
        const GridSet c = sumset(a, b);
        CHECK(c.count() <= 2 * a.count() * b.count());
        CHECK(c.count() >= std::max(a.count(), b.count()));
    }
}

TEST_CASE("oracle equivalence on small random sets") {
    Rng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const std::int64_t n = 8 + static_cast<std::int64_t>(rng.below(57));
        const GridSet a = random_set_1d(rng, n, 200);
        const GridSet b = random_set_1d(rng, n, 200);
        CHECK(abs_cells(sumset(a, b)) == sumset_oracle(a, b));
        CHECK(abs_cells(productset(a, b)) == productset_oracle(a, b));
    }
}
