#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fraclab/fit.hpp"
#include "fraclab/measure.hpp"

namespace fraclab {

// mu-hat(xi) = sum over cells of w(c) * exp(-2*pi*i * center(c) . xi).
// Deterministic balanced summation; |result| <= 1 with equality at xi = 0.
std::complex<double> measure_fourier(const WeightedMeasure& m, std::span<const double> xi);

// Least-squares power fit of sup over directions of |mu-hat(t*omega)|
// against t. Needs >= 8 magnitudes spanning >= 3 octaves, all below the
// N/4 anti-aliasing guard.
DecayFit decay_fit(const WeightedMeasure& m, std::span<const double> freqs,
                   const std::vector<std::vector<double>>& directions);

// sum over cell pairs of w w' * max(|u-v|, 1/N)^(-s); the exclude-diagonal
// variant drops the u == v terms.
double energy_integral(const WeightedMeasure& m, double s, bool exclude_diagonal = false);

// g(t) = sum over F-cells of w_F(y) |mu-hat_E(t*y)|^2, fitted as a power
// law in t. The fitted exponent is the measured decay rate of g.
DecayFit sphere_averaged_decay(const WeightedMeasure& m_e, const WeightedMeasure& m_f,
                               std::span<const double> t_grid);

// Sampled decay curve rows (t, sup-direction value) backing decay_fit;
// exposed for report emission.
std::vector<std::pair<double, double>> decay_samples(const WeightedMeasure& m,
                                                     std::span<const double> freqs,
                                                     const std::vector<std::vector<double>>& directions);

}  // namespace fraclab
