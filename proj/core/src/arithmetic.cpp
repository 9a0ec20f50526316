#include "fraclab/arithmetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "fraclab/errors.hpp"
#include "fraclab/numeric.hpp"
#include "fraclab/rng.hpp"

namespace fraclab {

namespace {

constexpr double kGeomTol = 1e-9;

void require_1d_same_resolution(const GridSet& a, const GridSet& b, const char* op) {
    a.validate();
    b.validate();
    if (a.dim != 1 || b.dim != 1) throw precondition_error(std::string(op) + ": operands must be 1-D");
    if (a.resolution != b.resolution)
        throw precondition_error(std::string(op) + ": resolutions differ (" + std::to_string(a.resolution) +
                                 " vs " + std::to_string(b.resolution) + ")");
}

// Bit vector over a contiguous absolute index range.
class BitRange {
public:
    BitRange(std::int64_t lo, std::int64_t hi) : lo_(lo), size_(hi - lo) {
        words_.assign(static_cast<std::size_t>((size_ + 63) / 64), 0);
    }

    void set(std::int64_t abs) {
        const auto i = static_cast<std::uint64_t>(abs - lo_);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    // this |= other << shift, where shift is in bits relative to this range.
    void or_shifted(const BitRange& other, std::int64_t shift_abs) {
        const std::int64_t shift = (other.lo_ + shift_abs) - lo_;
        const auto word_shift = static_cast<std::size_t>(shift >> 6);
        const unsigned bit_shift = static_cast<unsigned>(shift & 63);
        for (std::size_t w = 0; w < other.words_.size(); ++w) {
            const std::uint64_t v = other.words_[w];
            if (v == 0) continue;
            if (bit_shift == 0) {
                words_[w + word_shift] |= v;
            } else {
                words_[w + word_shift] |= v << bit_shift;
                if (w + word_shift + 1 < words_.size()) words_[w + word_shift + 1] |= v >> (64 - bit_shift);
            }
        }
    }

    void dilate_up_one() {
        std::uint64_t carry = 0;
        for (auto& w : words_) {
            const std::uint64_t next_carry = w >> 63;
            w |= (w << 1) | carry;
            carry = next_carry;
        }
    }

    std::vector<std::int64_t> occupied() const {
        std::vector<std::int64_t> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t v = words_[w];
            while (v) {
                const int b = std::countr_zero(v);
                out.push_back(lo_ + static_cast<std::int64_t>(w * 64 + static_cast<std::size_t>(b)));
                v &= v - 1;
            }
        }
        return out;
    }

private:
    std::int64_t lo_;
    std::int64_t size_;
    std::vector<std::uint64_t> words_;
};

GridSet from_abs_cells(std::int64_t resolution, std::vector<std::int64_t> abs) {
    if (abs.empty()) throw precondition_error("arithmetic: empty result");
    std::sort(abs.begin(), abs.end());
    abs.erase(std::unique(abs.begin(), abs.end()), abs.end());
    detail::check_budget(abs.size(), "arithmetic");
    GridSet s;
    s.dim = 1;
    s.resolution = resolution;
    s.origin = {abs.front()};
    s.extent = {abs.back() - abs.front() + 1};
    s.cells.reserve(abs.size());
    for (std::int64_t p : abs) s.cells.push_back(static_cast<std::uint64_t>(p - abs.front()));
    s.validate();
    return s;
}

BitRange bits_of(const GridSet& a) {
    BitRange bits(a.origin[0], a.origin[0] + a.extent[0]);
    for (std::uint64_t c : a.cells) bits.set(a.origin[0] + static_cast<std::int64_t>(c));
    return bits;
}

GridSet sum_cover(const GridSet& a, const GridSet& b) {
    const std::int64_t lo = a.origin[0] + b.origin[0];
    const std::int64_t hi = (a.origin[0] + a.extent[0]) + (b.origin[0] + b.extent[0]);
    detail::check_budget(static_cast<std::uint64_t>(hi - lo), "sumset");
    BitRange acc(lo, hi);
    const BitRange bits_a = bits_of(a);
    for (std::uint64_t c : b.cells) acc.or_shifted(bits_a, b.origin[0] + static_cast<std::int64_t>(c));
    acc.dilate_up_one();
    return from_abs_cells(a.resolution, acc.occupied());
}

}  // namespace

GridSet sumset(const GridSet& a, const GridSet& b) {
    require_1d_same_resolution(a, b, "sumset");
    return sum_cover(a, b);
}

GridSet productset(const GridSet& a, const GridSet& b, double box) {
    require_1d_same_resolution(a, b, "productset");
    const double n = static_cast<double>(a.resolution);
    for (const GridSet* s : {&a, &b}) {
        const double lo = static_cast<double>(s->origin[0]) / n;
        const double hi = static_cast<double>(s->origin[0] + s->extent[0]) / n;
        if (lo < -box - kGeomTol || hi > box + kGeomTol)
            throw precondition_error("productset: support outside [-" + std::to_string(box) + ", " +
                                     std::to_string(box) + "]");
    }

    const std::int64_t N = a.resolution;
    std::vector<std::int64_t> abs_out;
    abs_out.reserve(a.count() + b.count());
    for (std::uint64_t ca : a.cells) {
        const std::int64_t p = a.origin[0] + static_cast<std::int64_t>(ca);
        for (std::uint64_t cb : b.cells) {
            const std::int64_t q = b.origin[0] + static_cast<std::int64_t>(cb);
            // corner products in units of 1/N^2
            const std::int64_t c1 = p * q, c2 = p * (q + 1), c3 = (p + 1) * q, c4 = (p + 1) * (q + 1);
            const std::int64_t mn = std::min(std::min(c1, c2), std::min(c3, c4));
            const std::int64_t mx = std::max(std::max(c1, c2), std::max(c3, c4));
            const std::int64_t jlo = floor_div(mn, N);
            const std::int64_t jhi = floor_div(mx, N);
            for (std::int64_t j = jlo; j <= jhi; ++j) abs_out.push_back(j);
        }
        if (abs_out.size() / 8 > cell_budget()) detail::check_budget(abs_out.size(), "productset");
    }
    return from_abs_cells(N, std::move(abs_out));
}

GridSet dilate_cover(const GridSet& a, double c) {
    a.validate();
    if (a.dim != 1) throw precondition_error("dilate_cover: operand must be 1-D");
    std::vector<std::int64_t> abs_out;
    abs_out.reserve(a.count() * 2);
    for (std::uint64_t cell : a.cells) {
        const double p = static_cast<double>(a.origin[0] + static_cast<std::int64_t>(cell));
        const double lo = std::min(c * p, c * (p + 1.0));
        const double hi = std::max(c * p, c * (p + 1.0));
        const auto jlo = static_cast<std::int64_t>(std::floor(lo + kGeomTol));
        auto jhi = static_cast<std::int64_t>(std::floor(hi - kGeomTol));
        if (jhi < jlo) jhi = jlo;
        for (std::int64_t j = jlo; j <= jhi; ++j) abs_out.push_back(j);
    }
    return from_abs_cells(a.resolution, std::move(abs_out));
}

GridSet dilated_sum(std::span<const double> coeffs, const GridSet& a) {
    a.validate();
    if (a.dim != 1) throw precondition_error("dilated_sum: operand must be 1-D");
    if (coeffs.size() < 2) throw precondition_error("dilated_sum: need >= 2 coefficients");
    bool all_zero = true;
    for (double c : coeffs) {
        if (std::fabs(c) > 2.0 + kGeomTol) throw precondition_error("dilated_sum: coefficients must lie in [-2,2]");
        if (c != 0.0) all_zero = false;
    }
    if (all_zero) throw precondition_error("dilated_sum: all coefficients zero (degenerate input)");

    GridSet acc = dilate_cover(a, coeffs[0]);
    for (std::size_t i = 1; i < coeffs.size(); ++i) {
        const GridSet d = dilate_cover(a, coeffs[i]);
        acc = sum_cover(acc, d);
    }
    return acc;
}

WeightedMeasure convolve_sum_measures(const WeightedMeasure& m1, const WeightedMeasure& m2) {
    m1.validate();
    m2.validate();
    require_1d_same_resolution(m1.support, m2.support, "convolve_sum_measures");

    const GridSet& a = m1.support;
    const GridSet& b = m2.support;
    const std::int64_t lo = a.origin[0] + b.origin[0];
    const std::int64_t hi = (a.origin[0] + a.extent[0]) + (b.origin[0] + b.extent[0]) + 1;
    detail::check_budget(static_cast<std::uint64_t>(hi - lo), "convolve_sum_measures");

    std::vector<double> mass(static_cast<std::size_t>(hi - lo), 0.0);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const std::int64_t p = a.origin[0] + static_cast<std::int64_t>(a.cells[i]);
        const double wi = m1.weights[i];
        for (std::size_t j = 0; j < b.cells.size(); ++j) {
            const std::int64_t q = b.origin[0] + static_cast<std::int64_t>(b.cells[j]);
            const double w = wi * m2.weights[j] * 0.5;
            mass[static_cast<std::size_t>(p + q - lo)] += w;
            mass[static_cast<std::size_t>(p + q + 1 - lo)] += w;
        }
    }

    WeightedMeasure out;
    out.support.dim = 1;
    out.support.resolution = a.resolution;
    std::int64_t first = -1, last = -1;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        if (mass[i] > 0.0) {
            if (first < 0) first = static_cast<std::int64_t>(i);
            last = static_cast<std::int64_t>(i);
        }
    }
    out.support.origin = {lo + first};
    out.support.extent = {last - first + 1};
    for (std::int64_t i = first; i <= last; ++i) {
        if (mass[static_cast<std::size_t>(i)] > 0.0) {
            out.support.cells.push_back(static_cast<std::uint64_t>(i - first));
            out.weights.push_back(mass[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

std::vector<double> sample_coefficients(const GridSet& a, int count, std::uint64_t seed) {
    a.validate();
    if (a.dim != 1) throw precondition_error("sample_coefficients: set must be 1-D");
    if (count < 1) throw precondition_error("sample_coefficients: count must be positive");
    Rng rng(seed);
    std::vector<double> coeffs;
    coeffs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const std::uint64_t flat = a.cells[rng.below(a.count())];
        coeffs.push_back((static_cast<double>(a.origin[0] + static_cast<std::int64_t>(flat)) + 0.5) /
                         static_cast<double>(a.resolution));
    }
    return coeffs;
}

}  // namespace fraclab
