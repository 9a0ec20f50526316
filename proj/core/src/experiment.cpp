#include "fraclab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>

#include "fraclab/arithmetic.hpp"
#include "fraclab/dimension.hpp"
#include "fraclab/directions.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/projection.hpp"
#include "fraclab/rng.hpp"
#include "fraclab/simplex.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

using nlohmann::json;

std::string fraclab_version() { return "0.1.0"; }

// ------------------------------------------------------------- validation

namespace {

const std::set<std::string> kKinds = {"sumproduct", "projection", "tube", "decay",
                                      "pinned", "simplex", "condition"};

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw precondition_error("config: unknown key '" + it.key() + "' in " + where);
    }
}

void require_keys(const json& obj, const std::vector<std::string>& keys, const std::string& where) {
    for (const auto& k : keys)
        if (!obj.contains(k)) throw precondition_error("config: missing key '" + k + "' in " + where);
}

void require_nonempty_array(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.at(key).is_array() || obj.at(key).empty())
        throw precondition_error("config: '" + key + "' in " + where + " must be a nonempty array");
}

CantorSpec cantor_from_json(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"base", "digits", "depth"}, where);
    require_keys(j, {"base", "digits", "depth"}, where);
    CantorSpec spec;
    spec.base = j.at("base").get<std::int64_t>();
    spec.digits = j.at("digits").get<std::vector<int>>();
    spec.depth = j.at("depth").get<int>();
    spec.validate();
    return spec;
}

json cantor_to_json(const CantorSpec& spec) {
    return json{{"base", spec.base}, {"digits", spec.digits}, {"depth", spec.depth}};
}

Rational rational_from_json(const json& v, const std::string& where) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12f", v.get<double>());
        return Rational::parse(buf);
    }
    throw precondition_error("config: cannot parse rational in " + where);
}

json rational_to_json(const Rational& r) {
    return json{{"exact", r.str()}, {"value", r.to_double()}};
}

void validate_params(const std::string& kind, const json& p) {
    if (!p.is_object()) throw precondition_error("config: params must be an object");
    const std::string where = "params(" + kind + ")";
    if (kind == "condition") {
        reject_unknown_keys(p, {"tuples", "product_grid"}, where);
        bool any = false;
        if (p.contains("tuples")) {
            require_nonempty_array(p, "tuples", where);
            for (const auto& t : p.at("tuples")) {
                reject_unknown_keys(t, {"s_e", "s_f", "gamma_f", "l_f", "alpha", "d"}, where + ".tuples");
                require_keys(t, {"s_e", "s_f", "gamma_f", "l_f", "d"}, where + ".tuples");
            }
            any = true;
        }
        if (p.contains("product_grid")) {
            const auto& g = p.at("product_grid");
            reject_unknown_keys(g, {"s_a", "d"}, where + ".product_grid");
            require_keys(g, {"s_a", "d"}, where + ".product_grid");
            require_nonempty_array(g, "s_a", where + ".product_grid");
            require_nonempty_array(g, "d", where + ".product_grid");
            any = true;
        }
        if (!any) throw precondition_error("config: condition sweep needs 'tuples' or 'product_grid'");
    } else if (kind == "sumproduct") {
        reject_unknown_keys(p, {"cantor", "cantors", "coeff_count", "depth_ladder", "seeds"}, where);
        require_keys(p, {"coeff_count", "depth_ladder", "seeds"}, where);
        if (p.contains("cantor")) {
            cantor_from_json(p.at("cantor"), where + ".cantor");
        } else if (p.contains("cantors")) {
            require_nonempty_array(p, "cantors", where);
            for (const auto& c : p.at("cantors")) cantor_from_json(c, where + ".cantors");
        } else {
            throw precondition_error("config: sumproduct sweep needs 'cantor' or 'cantors'");
        }
        require_nonempty_array(p, "depth_ladder", where);
        require_nonempty_array(p, "seeds", where);
        if (p.at("coeff_count").get<int>() < 2)
            throw precondition_error("config: coeff_count must be >= 2");
    } else if (kind == "tube") {
        reject_unknown_keys(p, {"cantor", "depths", "direction_count", "delta_count",
                                "delta_max_pow", "delta_min_pow"}, where);
        require_keys(p, {"cantor", "depths"}, where);
        cantor_from_json(p.at("cantor"), where + ".cantor");
        require_nonempty_array(p, "depths", where);
    } else if (kind == "decay") {
        reject_unknown_keys(p, {"target", "resolution", "cantor", "freq_min", "freq_max",
                                "freq_count", "snap", "direction_count"}, where);
        require_keys(p, {"target"}, where);
        const std::string target = p.at("target").get<std::string>();
        if (target == "interval") {
            require_keys(p, {"resolution"}, where);
        } else if (target == "cantor") {
            require_keys(p, {"cantor"}, where);
            cantor_from_json(p.at("cantor"), where + ".cantor");
        } else {
            throw precondition_error("config: decay target must be 'interval' or 'cantor'");
        }
    } else if (kind == "projection") {
        reject_unknown_keys(p, {"cantor", "depth_ladder", "seeds"}, where);
        require_keys(p, {"cantor", "depth_ladder", "seeds"}, where);
        cantor_from_json(p.at("cantor"), where + ".cantor");
        require_nonempty_array(p, "depth_ladder", where);
        require_nonempty_array(p, "seeds", where);
    } else if (kind == "pinned") {
        reject_unknown_keys(p, {"sphere", "resolutions", "pin"}, where);
        require_keys(p, {"sphere", "resolutions"}, where);
        const auto& sp = p.at("sphere");
        reject_unknown_keys(sp, {"dim", "radius", "angular"}, where + ".sphere");
        require_keys(sp, {"dim", "radius"}, where + ".sphere");
        if (sp.contains("angular")) cantor_from_json(sp.at("angular"), where + ".sphere.angular");
        require_nonempty_array(p, "resolutions", where);
    } else if (kind == "simplex") {
        reject_unknown_keys(p, {"sphere", "resolution", "k", "samples", "bins", "seeds"}, where);
        require_keys(p, {"sphere", "resolution", "k", "samples", "bins", "seeds"}, where);
        const auto& sp = p.at("sphere");
        reject_unknown_keys(sp, {"dim", "radius", "angular"}, where + ".sphere");
        require_keys(sp, {"dim", "radius"}, where + ".sphere");
        if (sp.contains("angular")) cantor_from_json(sp.at("angular"), where + ".sphere.angular");
        require_nonempty_array(p, "seeds", where);
    } else {
        throw precondition_error("config: unknown experiment kind '" + kind + "'");
    }
}

SphereSubsetSpec sphere_from_json(const json& sp) {
    SphereSubsetSpec spec;
    spec.dim = sp.at("dim").get<int>();
    spec.radius = sp.at("radius").get<double>();
    if (sp.contains("angular")) spec.angular = cantor_from_json(sp.at("angular"), "sphere.angular");
    return spec;
}

double sphere_nominal_dimension(const SphereSubsetSpec& spec) {
    const double base = static_cast<double>(spec.dim - 1);
    return spec.angular ? base * spec.angular->dimension() : base;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw precondition_error("config: top level must be an object");
    reject_unknown_keys(j, {"kind", "seed", "params"}, "config");
    require_keys(j, {"kind", "seed", "params"}, "config");
    ExperimentConfig cfg;
    cfg.kind = j.at("kind").get<std::string>();
    if (!kKinds.count(cfg.kind)) throw precondition_error("config: unknown experiment kind '" + cfg.kind + "'");
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
        throw precondition_error("config: seed must be an explicit integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.params = j.at("params");
    validate_params(cfg.kind, cfg.params);
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw io_error("malformed JSON in config " + path);
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    return json{{"kind", kind}, {"seed", seed}, {"params", params}};
}

// ----------------------------------------------------------- row expansion

namespace {

std::vector<json> expand_rows(const ExperimentConfig& cfg) {
    std::vector<json> rows;
    const json& p = cfg.params;
    if (cfg.kind == "condition") {
        if (p.contains("tuples"))
            for (const auto& t : p.at("tuples")) rows.push_back(json{{"type", "tuple"}, {"tuple", t}});
        if (p.contains("product_grid"))
            for (const auto& d : p.at("product_grid").at("d"))
                for (const auto& sa : p.at("product_grid").at("s_a"))
                    rows.push_back(json{{"type", "product"}, {"s_a", sa}, {"d", d}});
    } else if (cfg.kind == "sumproduct") {
        json cantors = json::array();
        if (p.contains("cantor")) cantors.push_back(p.at("cantor"));
        if (p.contains("cantors"))
            for (const auto& c : p.at("cantors")) cantors.push_back(c);
        for (const auto& cantor : cantors)
            for (const auto& seed : p.at("seeds"))
                rows.push_back(json{{"cantor", cantor},
                                    {"coeff_count", p.at("coeff_count")},
                                    {"depth_ladder", p.at("depth_ladder")},
                                    {"seed", seed}});
    } else if (cfg.kind == "tube") {
        for (const auto& depth : p.at("depths")) {
            json r{{"cantor", p.at("cantor")}, {"depth", depth}};
            r["direction_count"] = p.value("direction_count", 64);
            r["delta_count"] = p.value("delta_count", 9);
            r["delta_max_pow"] = p.value("delta_max_pow", -2);
            r["delta_min_pow"] = p.value("delta_min_pow", -6);
            rows.push_back(std::move(r));
        }
    } else if (cfg.kind == "decay") {
        json r = p;
        rows.push_back(std::move(r));
    } else if (cfg.kind == "projection") {
        for (const auto& seed : p.at("seeds"))
            rows.push_back(json{{"cantor", p.at("cantor")}, {"depth_ladder", p.at("depth_ladder")}, {"seed", seed}});
    } else if (cfg.kind == "pinned") {
        json r = p;
        rows.push_back(std::move(r));
    } else if (cfg.kind == "simplex") {
        for (const auto& seed : p.at("seeds")) {
            json r{{"sphere", p.at("sphere")}, {"resolution", p.at("resolution")}, {"k", p.at("k")},
                   {"samples", p.at("samples")}, {"bins", p.at("bins")}, {"seed", seed}};
            rows.push_back(std::move(r));
        }
    }
    if (rows.empty()) throw precondition_error("config: parameter grid expands to zero rows");
    return rows;
}

}  // namespace

// ------------------------------------------------------------- predictions

json recompute_predicted(const std::string& kind, const json& rp) {
    json pred;
    if (kind == "condition") {
        if (rp.at("type") == "tuple") {
            const json& t = rp.at("tuple");
            const int d = t.at("d").get<int>();
            const Rational a = best_alpha(rational_from_json(t.at("s_e"), "s_e"),
                                          rational_from_json(t.at("s_f"), "s_f"),
                                          rational_from_json(t.at("gamma_f"), "gamma_f"),
                                          rational_from_json(t.at("l_f"), "l_f"), d);
            pred["best_alpha"] = rational_to_json(a);
        } else {
            const Rational s_a = rational_from_json(rp.at("s_a"), "s_a");
            const int d = rp.at("d").get<int>();
            const Rational closed =
                rational_min(Rational(1), Rational(2 * d - 1) * s_a + Rational(1) - Rational(d));
            pred["closed_form_alpha"] = rational_to_json(closed);
        }
    } else if (kind == "sumproduct") {
        const CantorSpec spec = cantor_from_json(rp.at("cantor"), "cantor");
        const int d = rp.at("coeff_count").get<int>();
        const Rational threshold = threshold_table(d, 1).sum_product;
        pred["s_a"] = spec.dimension();
        pred["threshold"] = rational_to_json(threshold);
        pred["expect_positive"] = spec.dimension() > threshold.to_double();
    } else if (kind == "tube") {
        const CantorSpec spec = cantor_from_json(rp.at("cantor"), "cantor");
        const double s_a = spec.dimension();
        pred["exponent"] = (2 - 1) * s_a;  // (d-1) s_A with d = 2 product factors
        pred["l_f"] = s_a;
    } else if (kind == "decay") {
        pred["gamma"] = rp.at("target") == "interval" ? 1.0 : 0.0;
    } else if (kind == "projection") {
        const CantorSpec spec = cantor_from_json(rp.at("cantor"), "cantor");
        const int d = 2;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", spec.dimension());
        const Rational s_a = Rational::parse(buf);
        const Rational alpha = best_alpha(Rational(d) * s_a, Rational(d) * s_a, Rational(0), s_a, d);
        pred["alpha_star"] = rational_to_json(alpha);
        pred["guarantees_positive"] = alpha >= Rational(1);
    } else if (kind == "pinned") {
        const SphereSubsetSpec spec = sphere_from_json(rp.at("sphere"));
        const Rational falconer = threshold_table(spec.dim, 1).falconer;
        pred["set_dimension"] = sphere_nominal_dimension(spec);
        pred["falconer_threshold"] = rational_to_json(falconer);
        pred["guarantees_positive"] = sphere_nominal_dimension(spec) > falconer.to_double();
    } else if (kind == "simplex") {
        const SphereSubsetSpec spec = sphere_from_json(rp.at("sphere"));
        const int k = rp.at("k").get<int>();
        const Thresholds t = threshold_table(spec.dim, k);
        pred["set_dimension"] = sphere_nominal_dimension(spec);
        pred["sphere_threshold"] = rational_to_json(t.sphere_simplex);
        pred["euclidean_threshold"] = rational_to_json(t.euclidean_simplex);
        pred["guarantees_positive"] = sphere_nominal_dimension(spec) > t.sphere_simplex.to_double();
    }
    return pred;
}

// -------------------------------------------------------------- row runners

namespace {

json run_condition_row(const json& rp) {
    json m;
    if (rp.at("type") == "tuple") {
        const json& t = rp.at("tuple");
        ProjectionCondition c;
        c.s_e = rational_from_json(t.at("s_e"), "s_e");
        c.s_f = rational_from_json(t.at("s_f"), "s_f");
        c.gamma_f = rational_from_json(t.at("gamma_f"), "gamma_f");
        c.l_f = rational_from_json(t.at("l_f"), "l_f");
        c.d = t.at("d").get<int>();
        if (t.contains("alpha")) {
            c.alpha = rational_from_json(t.at("alpha"), "alpha");
            const ConditionCheck r = check_condition(c);
            m["branch1"] = r.branch1_infinite ? json("inf") : json(r.branch1.str());
            m["branch2"] = r.branch2.str();
            m["holds"] = r.holds;
        }
        m["best_alpha"] = rational_to_json(best_alpha(c.s_e, c.s_f, c.gamma_f, c.l_f, c.d));
    } else {
        const Rational s_a = rational_from_json(rp.at("s_a"), "s_a");
        const int d = rp.at("d").get<int>();
        ProjectionCondition c{Rational(d) * s_a, Rational(d) * s_a, Rational(0), s_a, Rational(0), d};
        m["best_alpha"] = rational_to_json(best_alpha(c.s_e, c.s_f, c.gamma_f, c.l_f, d));
        // the text leaves open whether the L^1 reading takes alpha = 0 or
        // alpha = 1; report both side by side
        m["holds_at_alpha0"] = check_condition(c).holds;
        c.alpha = Rational(1);
        m["holds_at_alpha1"] = check_condition(c).holds;
    }
    return m;
}

json verdict_to_json(const PositivityVerdict& v) {
    json fr = json::array();
    for (const auto& [n, f] : v.fractions) fr.push_back(json::array({n, f}));
    return json{{"fractions", fr}, {"verdict", v.verdict_name()}, {"per_octave_factor", v.per_octave_factor}};
}

json run_sumproduct_row(const json& rp) {
    const CantorSpec spec = cantor_from_json(rp.at("cantor"), "cantor");
    const int coeff_count = rp.at("coeff_count").get<int>();
    const auto seed = rp.at("seed").get<std::uint64_t>();

    CantorSpec finest = spec;
    const GridSet a_fine = make_cantor(finest);
    const std::vector<double> coeffs = sample_coefficients(a_fine, coeff_count, seed);

    std::vector<GridSet> ladder;
    for (const auto& dj : rp.at("depth_ladder")) {
        CantorSpec level = spec;
        level.depth = dj.get<int>();
        ladder.push_back(dilated_sum(coeffs, make_cantor(level)));
    }
    const PositivityVerdict v = positivity_verdict(ladder);
    json m = verdict_to_json(v);
    m["coefficients"] = coeffs;
    return m;
}

json run_tube_row(const json& rp) {
    const CantorSpec base_spec = cantor_from_json(rp.at("cantor"), "cantor");
    CantorSpec spec = base_spec;
    spec.depth = rp.at("depth").get<int>();
    const GridSet a = make_cantor(spec);
    const GridSet e = make_product({a, a});
    const WeightedMeasure mu = uniform_measure(e);
    const FrostmanFit ff = frostman_fit(mu);

    const int dir_count = rp.at("direction_count").get<int>();
    const auto dirs = unit_directions(2, dir_count);
    const double b = static_cast<double>(spec.base);
    const double dmax = std::pow(b, rp.at("delta_max_pow").get<double>());
    double dmin = std::pow(b, rp.at("delta_min_pow").get<double>());
    dmin = std::max(dmin, 1.0 / static_cast<double>(e.resolution));
    const std::vector<double> deltas = log_spaced(dmax, dmin, rp.at("delta_count").get<int>());

    const TubeProfile tp = tube_profile(mu, dirs, deltas, ff.exponent);
    json samples = json::array();
    std::vector<double> ds, ms;
    for (const auto& [d, mass] : tp.samples) {
        samples.push_back(json::array({d, mass}));
        if (mass > 0) {
            ds.push_back(d);
            ms.push_back(mass);
        }
    }
    const LineFit lf = loglog_fit(ds, ms);
    return json{{"exponent", tp.exponent}, {"l_f", tp.l_f},        {"s_f", ff.exponent},
                {"residual", tp.residual}, {"intercept", lf.intercept}, {"samples", samples}};
}

json run_decay_row(const json& rp) {
    WeightedMeasure mu;
    double snap_base = 0.0;
    if (rp.at("target") == "interval") {
        mu = uniform_measure(make_full_interval(rp.at("resolution").get<std::int64_t>()));
    } else {
        const CantorSpec spec = cantor_from_json(rp.at("cantor"), "cantor");
        mu = uniform_measure(make_cantor(spec));
        snap_base = static_cast<double>(spec.base);
    }
    const double n = static_cast<double>(mu.resolution());
    const double fmin = rp.value("freq_min", 4.5);
    const double fmax = rp.value("freq_max", n / 8.0);
    const int count = rp.value("freq_count", 10);
    const std::string snap = rp.value("snap", rp.at("target") == "interval" ? "half" : "pow");

    std::vector<double> freqs;
    if (snap == "pow" && snap_base > 1.0) {
        for (double t = snap_base * snap_base; t <= fmax * (1 + 1e-12); t *= snap_base)
            if (t >= fmin) freqs.push_back(t);
        // the base-power ladder for a depth-n measure is short; pad octaves below if needed
        if (freqs.size() < 8)
            for (double t = freqs.empty() ? 4.0 : freqs.front() / 2.0; freqs.size() < 8; t /= 2.0)
                freqs.insert(freqs.begin(), t);
        std::sort(freqs.begin(), freqs.end());
    } else {
        for (double t : log_spaced(fmin, fmax, count)) freqs.push_back(std::floor(t) + 0.5);
        std::sort(freqs.begin(), freqs.end());
        freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
    }

    const auto dirs = unit_directions(mu.dim(), rp.value("direction_count", mu.dim() == 1 ? 1 : 64));
    const auto rows = decay_samples(mu, freqs, dirs);
    std::vector<double> ts, vs;
    json samples = json::array();
    for (const auto& [t, v] : rows) {
        samples.push_back(json::array({t, v}));
        ts.push_back(t);
        vs.push_back(std::max(v, 1e-300));
    }
    const DecayFit fit = fit_decay(ts, vs);
    return json{{"gamma", fit.exponent},       {"residual", fit.residual},
                {"intercept", fit.intercept},  {"exponent", fit.exponent},
                {"window", json::array({fit.window_min, fit.window_max})},
                {"samples", samples}};
}

json run_projection_row(const json& rp) {
    const CantorSpec base_spec = cantor_from_json(rp.at("cantor"), "cantor");
    const auto seed = rp.at("seed").get<std::uint64_t>();

    const GridSet a_fine = make_cantor(base_spec);
    const std::vector<double> y = sample_coefficients(a_fine, 2, seed);

    std::vector<GridSet> supports;
    for (const auto& dj : rp.at("depth_ladder")) {
        CantorSpec level = base_spec;
        level.depth = dj.get<int>();
        const GridSet a = make_cantor(level);
        const WeightedMeasure nu = project_measure(uniform_measure(make_product({a, a})), y);
        supports.push_back(nu.support);
    }
    const PositivityVerdict v = positivity_verdict(supports);
    json m = verdict_to_json(v);
    m["y"] = y;
    return m;
}

json run_pinned_row(const json& rp) {
    const SphereSubsetSpec spec = sphere_from_json(rp.at("sphere"));
    std::vector<double> pin;
    if (rp.contains("pin")) {
        pin = rp.at("pin").get<std::vector<double>>();
        if (static_cast<int>(pin.size()) != spec.dim) throw precondition_error("pinned: pin dimension mismatch");
    } else {
        pin.assign(static_cast<std::size_t>(spec.dim), 0.0);
        pin[0] = spec.radius;
    }
    std::vector<GridSet> ladder;
    for (const auto& nj : rp.at("resolutions"))
        ladder.push_back(pinned_distances(make_sphere_subset(spec, nj.get<std::int64_t>()), pin));
    const PositivityVerdict v = positivity_verdict(ladder);
    json m = verdict_to_json(v);
    m["pin"] = pin;
    return m;
}

bool saturation_flat(const SimplexSpectrum& spec) {
    // fewer than 1% new bins over the final 10% of samples
    const auto& curve = spec.saturation_curve;
    if (curve.size() < 10) return false;
    const std::uint64_t cutoff = spec.sampled_tuples - spec.sampled_tuples / 10;
    std::uint64_t at_cutoff = 0;
    for (const auto& [s, occ] : curve)
        if (s <= cutoff) at_cutoff = occ;
    return spec.occupied_bins > 0 &&
           static_cast<double>(spec.occupied_bins - at_cutoff) < 0.01 * static_cast<double>(spec.occupied_bins);
}

json run_simplex_row(const json& rp) {
    const SphereSubsetSpec spec = sphere_from_json(rp.at("sphere"));
    const GridSet e = make_sphere_subset(spec, rp.at("resolution").get<std::int64_t>());
    const SimplexSpectrum sp = simplex_spectrum(e, rp.at("k").get<int>(),
                                                rp.at("samples").get<std::uint64_t>(),
                                                rp.at("bins").get<std::int64_t>(),
                                                rp.at("seed").get<std::uint64_t>());
    json curve = json::array();
    for (const auto& [s, occ] : sp.saturation_curve) curve.push_back(json::array({s, occ}));
    return json{{"occupied_bins", sp.occupied_bins},
                {"reachable_bins", sp.reachable_bins},
                {"reachable_fraction", sp.reachable_fraction},
                {"box_fraction", sp.box_fraction},
                {"diameter", sp.diameter},
                {"saturated", saturation_flat(sp)},
                {"saturation_curve", curve}};
}

json make_agree(const std::string& kind, const json& measured, const json& predicted) {
    if (kind == "condition") {
        if (predicted.contains("best_alpha"))
            return measured.at("best_alpha").at("exact") == predicted.at("best_alpha").at("exact");
        return measured.at("best_alpha").at("exact") == predicted.at("closed_form_alpha").at("exact");
    }
    if (kind == "sumproduct") {
        if (!predicted.at("expect_positive").get<bool>()) return nullptr;  // no claim below threshold
        return measured.at("verdict") == "positive";
    }
    if (kind == "tube") {
        const bool e_ok = std::fabs(measured.at("exponent").get<double>() - predicted.at("exponent").get<double>()) <= 0.1;
        const bool l_ok = std::fabs(measured.at("l_f").get<double>() - predicted.at("l_f").get<double>()) <= 0.1;
        return e_ok && l_ok;
    }
    if (kind == "decay")
        return std::fabs(measured.at("gamma").get<double>() - predicted.at("gamma").get<double>()) <= 0.1;
    if (kind == "projection" || kind == "pinned") {
        if (!predicted.at("guarantees_positive").get<bool>()) return nullptr;
        return measured.at("verdict") == "positive";
    }
    return nullptr;  // simplex rows are probes
}

}  // namespace

ExperimentReport run_sweep(const ExperimentConfig& cfg, int threads) {
    const std::vector<json> row_params = expand_rows(cfg);

    ExperimentReport report;
    report.kind = cfg.kind;
    report.seed = cfg.seed;
    report.version = fraclab_version();
    report.config = cfg.to_json();
    {
        // FNV-1a of the canonical config dump
        const std::string dump = report.config.dump();
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : dump) {
            h ^= c;
            h *= 1099511628211ull;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        report.config_digest = buf;
    }

    report.rows.assign(row_params.size(), json{});
    parallel_for(row_params.size(), threads, [&](std::size_t i) {
        json row;
        row["index"] = i;
        row["params"] = row_params[i];
        try {
            json measured;
            if (cfg.kind == "condition") measured = run_condition_row(row_params[i]);
            else if (cfg.kind == "sumproduct") measured = run_sumproduct_row(row_params[i]);
            else if (cfg.kind == "tube") measured = run_tube_row(row_params[i]);
            else if (cfg.kind == "decay") measured = run_decay_row(row_params[i]);
            else if (cfg.kind == "projection") measured = run_projection_row(row_params[i]);
            else if (cfg.kind == "pinned") measured = run_pinned_row(row_params[i]);
            else measured = run_simplex_row(row_params[i]);
            const json predicted = recompute_predicted(cfg.kind, row_params[i]);
            row["measured"] = measured;
            row["predicted"] = predicted;
            row["agree"] = make_agree(cfg.kind, measured, predicted);
            row["status"] = "ok";
            row["error"] = "";
        } catch (const std::exception& e) {
            row["measured"] = json::object();
            row["predicted"] = json::object();
            row["agree"] = nullptr;
            row["status"] = "error";
            row["error"] = e.what();
        }
        report.rows[i] = std::move(row);
    });
    return report;
}

// ---------------------------------------------------------------- emission

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += "\"";
    return out;
}

std::string report_csv(const ExperimentReport& r) {
    std::string out = "index,kind,status,agree,params,measured,predicted,error\n";
    for (const auto& row : r.rows) {
        const json& agree = row.at("agree");
        out += std::to_string(row.at("index").get<std::size_t>());
        out += ",";
        out += r.kind;
        out += ",";
        out += row.at("status").get<std::string>();
        out += ",";
        out += agree.is_null() ? "" : (agree.get<bool>() ? "true" : "false");
        out += ",";
        out += csv_quote(row.at("params").dump());
        out += ",";
        out += csv_quote(row.at("measured").dump());
        out += ",";
        out += csv_quote(row.at("predicted").dump());
        out += ",";
        out += csv_quote(row.at("error").get<std::string>());
        out += "\n";
    }
    return out;
}

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// One log-log panel per row that carries fit samples.
std::string report_svg(const ExperimentReport& r) {
    struct Panel {
        std::vector<std::pair<double, double>> pts;
        double exponent = 0.0, intercept = 0.0;
        bool decay = true;
        std::string label;
    };
    std::vector<Panel> panels;
    for (const auto& row : r.rows) {
        if (row.at("status") != "ok") continue;
        const json& m = row.at("measured");
        if (!m.contains("samples") || !m.contains("exponent") || !m.contains("intercept")) continue;
        Panel p;
        for (const auto& s : m.at("samples")) p.pts.emplace_back(s[0].get<double>(), s[1].get<double>());
        p.exponent = m.at("exponent").get<double>();
        p.intercept = m.at("intercept").get<double>();
        p.decay = r.kind == "decay";
        p.label = r.kind + " row " + std::to_string(row.at("index").get<std::size_t>());
        panels.push_back(std::move(p));
    }

    const int w = 640, h = 360, ml = 70, mr = 20, mt = 30, mb = 50;
    const int total_h = panels.empty() ? h : static_cast<int>(panels.size()) * h;
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                      "\" height=\"" + std::to_string(total_h) + "\">\n";
    int oy = 0;
    for (const Panel& p : panels) {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        std::vector<std::pair<double, double>> lp;
        for (const auto& [t, v] : p.pts) {
            if (t <= 0 || v <= 0) continue;
            const double lx = std::log10(t), ly = std::log10(v);
            lp.emplace_back(lx, ly);
            xmin = std::min(xmin, lx);
            xmax = std::max(xmax, lx);
            ymin = std::min(ymin, ly);
            ymax = std::max(ymax, ly);
        }
        if (lp.empty()) continue;
        if (ymax - ymin < 1e-9) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
        auto sx = [&](double lx) {
            return ml + (lx - xmin) / (xmax - xmin) * (w - ml - mr);
        };
        auto sy = [&](double ly) {
            return oy + mt + (ymax - ly) / (ymax - ymin) * (h - mt - mb);
        };
        // shaded fit window (the full sampled range)
        svg += "<rect x=\"" + fmt(sx(xmin)) + "\" y=\"" + std::to_string(oy + mt) + "\" width=\"" +
               fmt(sx(xmax) - sx(xmin)) + "\" height=\"" + std::to_string(h - mt - mb) +
               "\" fill=\"#e8f0fe\"/>\n";
        // axes
        svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(oy + h - mb) + "\" x2=\"" +
               std::to_string(w - mr) + "\" y2=\"" + std::to_string(oy + h - mb) + "\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + std::to_string(ml) + "\" y1=\"" + std::to_string(oy + mt) + "\" x2=\"" +
               std::to_string(ml) + "\" y2=\"" + std::to_string(oy + h - mb) + "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double lx = xmin + (xmax - xmin) * i / 4.0;
            const double ly = ymin + (ymax - ymin) * i / 4.0;
            svg += "<text x=\"" + fmt(sx(lx)) + "\" y=\"" + std::to_string(oy + h - mb + 18) +
                   "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(lx, "%.2f") + "</text>\n";
            svg += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" + fmt(sy(ly) + 4) +
                   "\" font-size=\"11\" text-anchor=\"end\">" + fmt(ly, "%.2f") + "</text>\n";
        }
        svg += "<text x=\"" + std::to_string((ml + w - mr) / 2) + "\" y=\"" + std::to_string(oy + h - 12) +
               "\" font-size=\"13\" text-anchor=\"middle\">log10 scale</text>\n";
        svg += "<text x=\"16\" y=\"" + std::to_string(oy + (mt + h - mb) / 2) +
               "\" font-size=\"13\" transform=\"rotate(-90 16 " + std::to_string(oy + (mt + h - mb) / 2) +
               ")\" text-anchor=\"middle\">log10 value</text>\n";
        // fitted line: log10(v) = (intercept + slope*ln(t))/ln(10)
        const double slope = p.decay ? -p.exponent : p.exponent;
        const double ln10 = std::log(10.0);
        auto line_y = [&](double lx) { return (p.intercept + slope * lx * ln10) / ln10; };
        svg += "<line x1=\"" + fmt(sx(xmin)) + "\" y1=\"" + fmt(sy(line_y(xmin))) + "\" x2=\"" + fmt(sx(xmax)) +
               "\" y2=\"" + fmt(sy(line_y(xmax))) + "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
        for (const auto& [lx, ly] : lp)
            svg += "<circle cx=\"" + fmt(sx(lx)) + "\" cy=\"" + fmt(sy(ly)) + "\" r=\"3\" fill=\"#2c3e50\"/>\n";
        svg += "<text x=\"" + std::to_string(ml + 10) + "\" y=\"" + std::to_string(oy + mt + 16) +
               "\" font-size=\"13\">" + p.label + ": exponent = " + fmt(p.exponent, "%.3f") + "</text>\n";
        oy += h;
    }
    if (panels.empty())
        svg += "<text x=\"20\" y=\"40\" font-size=\"14\">no exponent samples in this report</text>\n";
    svg += "</svg>\n";
    return svg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw io_error("failed writing " + path);
}

}  // namespace

json ExperimentReport::to_json() const {
    json j;
    j["kind"] = kind;
    j["seed"] = seed;
    j["version"] = version;
    j["config_digest"] = config_digest;
    j["config"] = config;
    j["rows"] = rows;
    return j;
}

ExperimentReport ExperimentReport::from_json(const json& j) {
    ExperimentReport r;
    r.kind = j.at("kind").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    r.config_digest = j.at("config_digest").get<std::string>();
    r.config = j.at("config");
    for (const auto& row : j.at("rows")) r.rows.push_back(row);
    return r;
}

ExperimentReport ExperimentReport::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open report " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw io_error("malformed JSON in report " + path);
    return from_json(j);
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& base_path,
                                     const std::vector<ReportFormat>& formats, bool with_timestamp) {
    if (report.rows.empty()) throw precondition_error("emit_report: report has no rows");

    // stale-threshold guard: predictions must reproduce from row parameters
    for (const auto& row : report.rows) {
        if (row.at("status") != "ok") continue;
        const json fresh = recompute_predicted(report.kind, row.at("params"));
        if (fresh != row.at("predicted"))
            throw std::logic_error("emit_report: stored prediction does not match recomputation for row " +
                                   std::to_string(row.at("index").get<std::size_t>()));
    }

    std::vector<std::string> written;
    for (ReportFormat f : formats) {
        if (f == ReportFormat::csv) {
            const std::string path = base_path + ".csv";
            write_file(path, report_csv(report));
            written.push_back(path);
        } else if (f == ReportFormat::json) {
            json j = report.to_json();
            json prov{{"seed", report.seed}, {"version", report.version}, {"config_digest", report.config_digest}};
            if (with_timestamp) {
                char buf[64];
                const std::time_t now = std::time(nullptr);
                std::tm tm{};
                gmtime_r(&now, &tm);
                std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
                prov["timestamp"] = buf;
            }
            j["provenance"] = prov;
            const std::string path = base_path + ".json";
            write_file(path, j.dump(2) + "\n");
            written.push_back(path);
        } else {
            const std::string path = base_path + ".svg";
            write_file(path, report_svg(report));
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace fraclab
