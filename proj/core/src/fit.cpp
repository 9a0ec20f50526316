#include "fraclab/fit.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"

namespace fraclab {

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw precondition_error("least_squares: need >= 2 paired samples");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw precondition_error("least_squares: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

LineFit loglog_fit(std::span<const double> scales, std::span<const double> values) {
    std::vector<double> lx(scales.size()), ly(values.size());
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= 0.0) throw precondition_error("loglog_fit: nonpositive scale");
        if (values[i] <= 0.0) throw precondition_error("loglog_fit: nonpositive value");
        lx[i] = std::log(scales[i]);
        ly[i] = std::log(values[i]);
    }
    return least_squares(lx, ly);
}

static DecayFit wrap(std::span<const double> t, const LineFit& lf, double exponent) {
    DecayFit d;
    d.exponent = exponent;
    d.intercept = lf.intercept;
    d.residual = lf.residual;
    const auto [mn, mx] = std::minmax_element(t.begin(), t.end());
    d.window_min = *mn;
    d.window_max = *mx;
    d.sample_count = t.size();
    return d;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> v) {
    const LineFit lf = loglog_fit(t, v);
    return wrap(t, lf, std::max(0.0, -lf.slope));
}

DecayFit fit_growth(std::span<const double> t, std::span<const double> v) {
    const LineFit lf = loglog_fit(t, v);
    return wrap(t, lf, lf.slope);
}

}  // namespace fraclab
