#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fraclab {

// Power-law fit of a positive quantity against a scale parameter,
// v ~ C * t^(-exponent), from least squares in log-log coordinates.
// `residual` is the root-mean-square log deviation over the window.
struct DecayFit {
    double exponent = 0.0;
    double intercept = 0.0;  // log C
    double residual = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
    std::size_t sample_count = 0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of residuals
};

// Ordinary least squares y = slope*x + intercept.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// Fits log(value) against log(scale); returns slope/intercept/residual in
// log space. Values must be positive.
LineFit loglog_fit(std::span<const double> scales, std::span<const double> values);

// Decay-style wrapper: exponent = max(0, -slope of log v vs log t).
DecayFit fit_decay(std::span<const double> t, std::span<const double> v);

// Growth-style wrapper: exponent = slope of log v vs log t (box dimensions,
// tube exponents).
DecayFit fit_growth(std::span<const double> t, std::span<const double> v);

}  // namespace fraclab
