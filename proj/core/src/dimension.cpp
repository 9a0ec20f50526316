#include "fraclab/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"

namespace fraclab {

void ProjectionCondition::validate() const {
    if (d < 2) throw precondition_error("condition: ambient dimension must be >= 2");
    const Rational zero(0);
    if (s_e < zero || s_f < zero || gamma_f < zero || l_f < zero)
        throw precondition_error("condition: dimensions and exponents must be >= 0");
    if (s_e > Rational(d) || s_f > Rational(d))
        throw precondition_error("condition: s_e, s_f must be <= d");
    if (alpha < zero || alpha > Rational(1)) throw precondition_error("condition: alpha must lie in [0,1]");
}

ConditionCheck check_condition(const ProjectionCondition& c) {
    c.validate();
    ConditionCheck r;
    const Rational m = rational_min(c.gamma_f, c.s_e);
    if (c.alpha == Rational(0)) {
        r.branch1_infinite = m > Rational(0);
        r.branch1 = Rational(0);
    } else {
        r.branch1 = m / c.alpha;
    }
    r.branch2 = (c.s_e + c.s_f - c.l_f + Rational(1) - c.alpha) / Rational(c.d);
    r.holds = r.branch1_infinite || r.branch1 > Rational(1) || r.branch2 > Rational(1);
    return r;
}

Rational best_alpha(const Rational& s_e, const Rational& s_f, const Rational& gamma_f,
                    const Rational& l_f, int d) {
    ProjectionCondition probe{s_e, s_f, gamma_f, l_f, Rational(0), d};
    probe.validate();
    const Rational first = rational_min(gamma_f, s_e);
    const Rational second = s_e + s_f - l_f + Rational(1) - Rational(d);
    // the first branch holds for alpha < min{gamma_f, s_e}, which is a
    // nonempty range only when that minimum is positive; a value <= 0
    // therefore reports how far the second branch falls short
    if (first > Rational(0)) return rational_min(Rational(1), rational_max(first, second));
    return rational_min(Rational(1), second);
}

Thresholds threshold_table(int d, int k) {
    if (d < 2) throw precondition_error("threshold_table: d must be >= 2");
    if (k < 1 || k > d) throw precondition_error("threshold_table: k must lie in [1, d]");
    Thresholds t;
    t.sum_product = Rational(1, 2) + Rational(1, 2 * (2 * std::int64_t{d} - 1));
    t.falconer = Rational(d, 2);
    t.sphere_simplex = Rational(d + k - 1, 2);
    t.euclidean_simplex = Rational(d + k + 1, 2);
    return t;
}

DecayFit box_dimension(const std::vector<GridSet>& ladder) {
    if (ladder.size() < 4) throw precondition_error("box_dimension: need >= 4 ladder points");
    std::vector<double> ns, counts;
    for (const GridSet& s : ladder) {
        s.validate();
        if (s.cells.empty()) throw precondition_error("box_dimension: empty ladder entry");
        ns.push_back(static_cast<double>(s.resolution));
        counts.push_back(static_cast<double>(s.count()));
    }
    return fit_growth(ns, counts);
}

std::string PositivityVerdict::verdict_name() const {
    switch (verdict) {
        case Kind::positive: return "positive";
        case Kind::null_measure: return "null";
        default: return "inconclusive";
    }
}

PositivityVerdict positivity_verdict(const std::vector<GridSet>& ladder) {
    if (ladder.size() < 4) throw precondition_error("positivity_verdict: need >= 4 ladder points");
    std::vector<const GridSet*> ordered;
    for (const GridSet& s : ladder) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const GridSet* a, const GridSet* b) { return a->resolution < b->resolution; });
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (ordered[i]->resolution == ordered[i - 1]->resolution)
            throw precondition_error("positivity_verdict: ladder resolutions must increase");

    PositivityVerdict v;
    std::vector<double> ns, fs;
    for (const GridSet* s : ordered) {
        const double f = occupied_fraction(*s);
        v.fractions.emplace_back(s->resolution, f);
        ns.push_back(static_cast<double>(s->resolution));
        fs.push_back(std::max(f, 1e-300));
    }

    const double slope = loglog_fit(ns, fs).slope;
    v.per_octave_factor = std::exp2(slope);

    const std::size_t m = v.fractions.size();
    bool non_decreasing = true;
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (v.fractions[i + 1].second < v.fractions[i].second - 0.02) non_decreasing = false;

    if (v.fractions[m - 1].second >= 0.98 && v.fractions[m - 2].second >= 0.98 && non_decreasing) {
        v.verdict = PositivityVerdict::Kind::positive;
    } else if (v.per_octave_factor < 0.9) {
        v.verdict = PositivityVerdict::Kind::null_measure;
    } else {
        v.verdict = PositivityVerdict::Kind::inconclusive;
    }
    return v;
}

}  // namespace fraclab
