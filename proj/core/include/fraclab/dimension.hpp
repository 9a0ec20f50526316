#pragma once

#include <string>
#include <vector>

#include "fraclab/fit.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/rational.hpp"

namespace fraclab {

// Inputs of the projection sufficiency condition
//   max{ min{gamma_f, s_e}/alpha , (s_e + s_f - l_f + 1 - alpha)/d } > 1.
struct ProjectionCondition {
    Rational s_e;
    Rational s_f;
    Rational gamma_f;
    Rational l_f;
    Rational alpha;
    int d = 2;

    void validate() const;
};

struct ConditionCheck {
    // first branch min{gamma_f, s_e}/alpha; at alpha = 0 it is +infinity
    // when min{gamma_f, s_e} > 0 and 0 otherwise (documented convention).
    Rational branch1;
    bool branch1_infinite = false;
    Rational branch2;
    bool holds = false;
};

ConditionCheck check_condition(const ProjectionCondition& c);

// Supremum over alpha in [0,1] for which the condition holds:
//   min(1, max( min{gamma_f, s_e}, s_e + s_f - l_f + 1 - d )).
// A value <= 0 means the condition holds for no alpha.
Rational best_alpha(const Rational& s_e, const Rational& s_f, const Rational& gamma_f,
                    const Rational& l_f, int d);

// The dimension thresholds for ambient dimension d and simplex order k.
struct Thresholds {
    Rational sum_product;       // 1/2 + 1/(2(2d-1))
    Rational falconer;          // d/2
    Rational sphere_simplex;    // (d+k-1)/2
    Rational euclidean_simplex; // (d+k+1)/2
};

Thresholds threshold_table(int d, int k);

// Least-squares slope of log(cell count) against log(resolution) over a
// ladder of the same construction.
DecayFit box_dimension(const std::vector<GridSet>& ladder);

// Occupied-fraction trend over a refinement ladder.
//   positive      fraction >= 0.98 at the two finest levels and
//                 non-decreasing across the ladder within 0.02
//   null          fitted occupancy factor per refinement octave < 0.9
//   inconclusive  everything else
struct PositivityVerdict {
    enum class Kind { positive, null_measure, inconclusive };
    std::vector<std::pair<std::int64_t, double>> fractions;  // (resolution, occupied fraction)
    Kind verdict = Kind::inconclusive;
    double per_octave_factor = 1.0;

    std::string verdict_name() const;
};

PositivityVerdict positivity_verdict(const std::vector<GridSet>& ladder);

}  // namespace fraclab
