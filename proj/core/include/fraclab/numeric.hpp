#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>

namespace fraclab {

// Floor division that is exact for negative operands (b > 0).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// sin(pi*x) and cos(pi*x) with exact range reduction.
//
// Invariant: whenever x+1 is exactly representable, sinpi(x+1) == -sinpi(x)
// and cospi(x+1) == -cospi(x) bit for bit. Structural cancellations in
// transform sums (full-period geometric sums, conjugate symmetry) then
// cancel exactly instead of leaving rounding residue.
inline double sinpi(double x) {
    double r = std::remainder(x, 2.0);  // exact, r in [-1, 1]
    double sign = 1.0;
    if (r < 0.0) {
        r = -r;
        sign = -1.0;
    }
    if (r > 0.5) r = 1.0 - r;  // exact by Sterbenz
    return sign * std::sin(std::numbers::pi * r);
}

inline double cospi(double x) {
    double r = std::fabs(std::remainder(x, 2.0));
    if (r <= 0.5) return std::cos(std::numbers::pi * r);
    return -std::cos(std::numbers::pi * (1.0 - r));
}

// Balanced pairwise summation of f(i) over [lo, hi). Deterministic tree
// shape: mirror-symmetric inputs cancel exactly (negation commutes with
// round-to-nearest).
template <typename F>
double pairwise_sum(std::size_t lo, std::size_t hi, F&& term) {
    const std::size_t n = hi - lo;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = lo + n / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

// Neumaier compensated accumulator for order-insensitive mass checks.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

}  // namespace fraclab
