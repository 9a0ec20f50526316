// fraclab command line: discretized fractal sets and measures, their
// arithmetic, transforms, projections, configuration spectra, and the
// threshold algebra, wired into seeded experiment sweeps.

#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclab/arithmetic.hpp"
#include "fraclab/dimension.hpp"
#include "fraclab/directions.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/experiment.hpp"
#include "fraclab/fit.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/io.hpp"
#include "fraclab/measure.hpp"
#include "fraclab/projection.hpp"
#include "fraclab/simplex.hpp"
#include "fraclab/spectral.hpp"

using nlohmann::json;
using namespace fraclab;

namespace {

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw precondition_error("expected a comma-separated list of numbers: '" + csv + "'");
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_doubles(csv)) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<std::vector<double>> parse_vectors(const std::string& spec) {
    std::vector<std::vector<double>> out;
    std::stringstream ss(spec);
    std::string group;
    while (std::getline(ss, group, ';')) {
        if (!group.empty()) out.push_back(parse_doubles(group));
    }
    if (out.empty()) throw precondition_error("expected ';'-separated vectors: '" + spec + "'");
    return out;
}

SetFormat format_for(const std::string& path) {
    return path.size() >= 5 && path.substr(path.size() - 5) == ".frsj" ? SetFormat::FRSJ : SetFormat::FRS1;
}

void save_set_or_measure(const GridSet& s, bool as_measure, const std::string& out) {
    if (as_measure)
        save_measure(uniform_measure(s), out);
    else
        save_grid_set(s, out, format_for(out));
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw io_error("cannot open " + path + " for writing");
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
}

std::string fit_csv(const std::vector<std::pair<double, double>>& rows) {
    std::string out = "t,value,log_t,log_value\n";
    for (const auto& [t, v] : rows) {
        out += fmt17(t) + "," + fmt17(v) + "," + fmt17(std::log(t)) + "," +
               fmt17(v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity()) + "\n";
    }
    return out;
}

json fit_json(const DecayFit& f) {
    return json{{"exponent", f.exponent},
                {"intercept", f.intercept},
                {"residual", f.residual},
                {"window", json::array({f.window_min, f.window_max})},
                {"sample_count", f.sample_count}};
}

std::vector<ReportFormat> parse_formats(const std::string& csv) {
    std::vector<ReportFormat> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "csv") out.push_back(ReportFormat::csv);
        else if (item == "json") out.push_back(ReportFormat::json);
        else if (item == "svg") out.push_back(ReportFormat::svg);
        else if (!item.empty()) throw precondition_error("unknown report format '" + item + "'");
    }
    if (out.empty()) throw precondition_error("no report formats selected");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraclab: a numerical laboratory for fractal sets, projections, and configuration spectra"};
    app.require_subcommand(1);
    app.fallthrough(true);  // global flags may follow the subcommand

    std::uint64_t seed = 0;
    int threads = 1;
    std::uint64_t budget = cell_budget();
    std::string out_path;
    app.add_option("--seed", seed, "master seed")->envname("FRACLAB_SEED");
    app.add_option("--threads", threads, "worker threads")->envname("FRACLAB_THREADS");
    app.add_option("--cell-budget", budget, "max cells per object")->envname("FRACLAB_CELL_BUDGET");
    app.add_option("--out", out_path, "output path (or base path)");

    // generate
    auto* gen = app.add_subcommand("generate", "build a set or uniform measure");
    std::string gen_kind = "cantor";
    std::int64_t gen_base = 3, gen_resolution = 0;
    std::string gen_digits = "0,2";
    int gen_depth = 6, gen_factors = 2, gen_dim = 2;
    double gen_radius = 1.0;
    std::string gen_angular;
    int gen_angular_depth = 0;
    std::int64_t gen_angular_base = 3;
    bool gen_measure = false;
    gen->add_option("--kind", gen_kind, "cantor | interval | product | sphere")->required();
    gen->add_option("--base", gen_base, "cantor base");
    gen->add_option("--digits", gen_digits, "cantor digits, comma separated");
    gen->add_option("--depth", gen_depth, "cantor depth");
    gen->add_option("--resolution", gen_resolution, "grid resolution N");
    gen->add_option("--factors", gen_factors, "product: number of factors");
    gen->add_option("--dim", gen_dim, "sphere: ambient dimension");
    gen->add_option("--radius", gen_radius, "sphere: radius");
    gen->add_option("--angular-digits", gen_angular, "sphere: angular cantor digits");
    gen->add_option("--angular-base", gen_angular_base, "sphere: angular cantor base");
    gen->add_option("--angular-depth", gen_angular_depth, "sphere: angular cantor depth");
    gen->add_flag("--measure", gen_measure, "emit the uniform measure (FRM1)");

    // arithmetic
    auto* sum = app.add_subcommand("sumset", "interval-arithmetic sumset of two 1-D sets");
    std::string in_a, in_b;
    sum->add_option("a", in_a)->required();
    sum->add_option("b", in_b)->required();

    auto* prod = app.add_subcommand("product", "interval-arithmetic product set of two 1-D sets");
    double prod_box = 2.0;
    prod->add_option("a", in_a)->required();
    prod->add_option("b", in_b)->required();
    prod->add_option("--box", prod_box, "support bounding box half-width");

    auto* dil = app.add_subcommand("dilated-sum", "a_1 A + ... + a_d A");
    std::string dil_coeffs;
    int dil_sample = 0;
    dil->add_option("a", in_a)->required();
    dil->add_option("--coeffs", dil_coeffs, "comma-separated coefficients");
    dil->add_option("--sample-coeffs", dil_sample, "draw this many coefficients from A (seeded)");

    // projections
    auto* proj = app.add_subcommand("project", "pushforward of a measure under x -> x.y");
    std::string proj_vec;
    proj->add_option("measure", in_a)->required();
    proj->add_option("--vector", proj_vec, "projection vector y")->required();

    auto* mproj = app.add_subcommand("multi-project", "pushforward under x -> (x.y1,...,x.yk)");
    std::string mproj_vecs;
    mproj->add_option("measure", in_a)->required();
    mproj->add_option("--vectors", mproj_vecs, "';'-separated vectors")->required();

    // spectral
    auto* dec = app.add_subcommand("decay", "Fourier decay fit of a measure");
    double dec_fmin = 4.5, dec_fmax = 0.0;
    int dec_count = 10, dec_dirs = 64;
    dec->add_option("measure", in_a)->required();
    dec->add_option("--freq-min", dec_fmin);
    dec->add_option("--freq-max", dec_fmax, "default N/8");
    dec->add_option("--freq-count", dec_count);
    dec->add_option("--directions", dec_dirs);

    auto* ener = app.add_subcommand("energy", "energy integral of a measure");
    double ener_s = 0.5;
    bool ener_nodiag = false;
    ener->add_option("measure", in_a)->required();
    ener->add_option("--s", ener_s, "energy exponent")->required();
    ener->add_flag("--exclude-diagonal", ener_nodiag);

    auto* tub = app.add_subcommand("tube", "tube-mass profile of a measure");
    int tub_dirs = 64, tub_count = 9;
    double tub_dmin = 0.0, tub_dmax = 0.0, tub_sf = -1.0;
    tub->add_option("measure", in_a)->required();
    tub->add_option("--directions", tub_dirs);
    tub->add_option("--delta-min", tub_dmin, "default 1/N");
    tub->add_option("--delta-max", tub_dmax, "default 32/N");
    tub->add_option("--delta-count", tub_count);
    tub->add_option("--sf", tub_sf, "s_F (default: Frostman fit)");

    auto* pin = app.add_subcommand("pinned", "pinned distance set of a grid set");
    std::string pin_vec;
    pin->add_option("set", in_a)->required();
    pin->add_option("--pin", pin_vec, "pin point y")->required();

    // dimension lab
    auto* chk = app.add_subcommand("check", "evaluate the projection sufficiency condition");
    std::string chk_se, chk_sf, chk_gamma, chk_lf, chk_alpha = "1";
    int chk_d = 2;
    chk->add_option("--se", chk_se)->required();
    chk->add_option("--sf", chk_sf)->required();
    chk->add_option("--gamma", chk_gamma)->required();
    chk->add_option("--lf", chk_lf)->required();
    chk->add_option("--alpha", chk_alpha);
    chk->add_option("--d", chk_d);

    auto* thr = app.add_subcommand("thresholds", "dimension thresholds for (d,k) ranges");
    int thr_dmax = 6;
    bool thr_json = false;
    thr->add_option("--d-max", thr_dmax);
    thr->add_flag("--json", thr_json);

    // configurations
    auto* simp = app.add_subcommand("simplex", "congruence-class occupancy spectrum");
    int simp_k = 2;
    std::uint64_t simp_samples = 100000;
    std::int64_t simp_bins = 16;
    std::string simp_center;
    double simp_radius = 0.0;
    simp->add_option("set", in_a)->required();
    simp->add_option("--k", simp_k);
    simp->add_option("--samples", simp_samples);
    simp->add_option("--bins", simp_bins);
    simp->add_option("--sphere-center", simp_center, "restrict to cells near a sphere about this center");
    simp->add_option("--sphere-radius", simp_radius);

    // harness
    auto* swp = app.add_subcommand("sweep", "run an experiment sweep from a JSON config");
    std::string swp_formats = "csv,json";
    bool swp_timestamp = false;
    bool swp_seed_override = false;
    swp->add_option("config", in_a)->required();
    swp->add_option("--formats", swp_formats, "csv,json,svg");
    swp->add_flag("--with-timestamp", swp_timestamp, "include a wall-clock timestamp in provenance");
    swp->add_flag("--override-seed", swp_seed_override, "replace the config seed with --seed");

    auto* rep = app.add_subcommand("report", "re-emit a stored report");
    std::string rep_formats = "csv";
    rep->add_option("report", in_a)->required();
    rep->add_option("--formats", rep_formats, "csv,json,svg");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        set_cell_budget(budget);

        if (*gen) {
            if (out_path.empty()) throw precondition_error("generate: --out is required");
            GridSet s;
            if (gen_kind == "cantor") {
                s = make_cantor({gen_base, parse_ints(gen_digits), gen_depth});
            } else if (gen_kind == "interval") {
                if (gen_resolution <= 0) throw precondition_error("generate interval: --resolution required");
                s = make_full_interval(gen_resolution);
            } else if (gen_kind == "product") {
                const GridSet a = make_cantor({gen_base, parse_ints(gen_digits), gen_depth});
                std::vector<GridSet> factors(static_cast<std::size_t>(gen_factors), a);
                s = make_product(factors);
            } else if (gen_kind == "sphere") {
                if (gen_resolution <= 0) throw precondition_error("generate sphere: --resolution required");
                SphereSubsetSpec spec;
                spec.dim = gen_dim;
                spec.radius = gen_radius;
                if (gen_angular_depth > 0)
                    spec.angular = CantorSpec{gen_angular_base, parse_ints(gen_angular), gen_angular_depth};
                s = make_sphere_subset(spec, gen_resolution);
            } else {
                throw precondition_error("generate: unknown kind '" + gen_kind + "'");
            }
            save_set_or_measure(s, gen_measure, out_path);
            std::cout << json{{"cells", s.count()}, {"resolution", s.resolution}, {"dim", s.dim}}.dump() << "\n";
        } else if (*sum) {
            if (out_path.empty()) throw precondition_error("sumset: --out is required");
            const GridSet c = sumset(load_grid_set(in_a), load_grid_set(in_b));
            save_grid_set(c, out_path, format_for(out_path));
            std::cout << json{{"cells", c.count()}, {"occupied_fraction", occupied_fraction(c)}}.dump() << "\n";
        } else if (*prod) {
            if (out_path.empty()) throw precondition_error("product: --out is required");
            const GridSet c = productset(load_grid_set(in_a), load_grid_set(in_b), prod_box);
            save_grid_set(c, out_path, format_for(out_path));
            std::cout << json{{"cells", c.count()}, {"occupied_fraction", occupied_fraction(c)}}.dump() << "\n";
        } else if (*dil) {
            if (out_path.empty()) throw precondition_error("dilated-sum: --out is required");
            const GridSet a = load_grid_set(in_a);
            std::vector<double> coeffs;
            if (!dil_coeffs.empty())
                coeffs = parse_doubles(dil_coeffs);
            else if (dil_sample > 0)
                coeffs = sample_coefficients(a, dil_sample, seed);
            else
                throw precondition_error("dilated-sum: give --coeffs or --sample-coeffs");
            const GridSet c = dilated_sum(coeffs, a);
            save_grid_set(c, out_path, format_for(out_path));
            std::cout << json{{"coefficients", coeffs},
                              {"cells", c.count()},
                              {"occupied_fraction", occupied_fraction(c)}}.dump()
                      << "\n";
        } else if (*proj) {
            if (out_path.empty()) throw precondition_error("project: --out is required");
            const std::vector<double> y = parse_doubles(proj_vec);
            bool zero = true;
            for (double v : y) zero = zero && v == 0.0;
            if (zero) std::cerr << "warning: y = 0 is degenerate; all mass lands at 0\n";
            const WeightedMeasure nu = project_measure(load_measure(in_a), y);
            save_measure(nu, out_path);
            std::cout << json{{"cells", nu.support.count()}, {"mass", nu.total_mass()}}.dump() << "\n";
        } else if (*mproj) {
            if (out_path.empty()) throw precondition_error("multi-project: --out is required");
            const WeightedMeasure nu = multi_project(load_measure(in_a), parse_vectors(mproj_vecs));
            save_measure(nu, out_path);
            std::cout << json{{"cells", nu.support.count()}, {"mass", nu.total_mass()}}.dump() << "\n";
        } else if (*dec) {
            if (out_path.empty()) throw precondition_error("decay: --out base path is required");
            const WeightedMeasure m = load_measure(in_a);
            if (dec_fmax <= 0.0) dec_fmax = static_cast<double>(m.resolution()) / 8.0;
            std::vector<double> freqs;
            for (int i = 0; i < dec_count; ++i) {
                const double f = dec_count == 1 ? 0.0 : static_cast<double>(i) / (dec_count - 1);
                const double t = std::exp(std::log(dec_fmin) + f * (std::log(dec_fmax) - std::log(dec_fmin)));
                freqs.push_back(std::floor(t) + 0.5);
            }
            std::sort(freqs.begin(), freqs.end());
            freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
            const auto dirs = unit_directions(m.dim(), m.dim() == 1 ? 1 : dec_dirs, seed);
            const auto rows = decay_samples(m, freqs, dirs);
            std::vector<double> ts, vs;
            for (const auto& [t, v] : rows) {
                ts.push_back(t);
                vs.push_back(std::max(v, 1e-300));
            }
            const DecayFit fit = fit_decay(ts, vs);
            write_text(out_path + ".csv", fit_csv(rows));
            write_text(out_path + ".json", fit_json(fit).dump(2) + "\n");
            std::cout << fit_json(fit).dump() << "\n";
        } else if (*ener) {
            const double v = energy_integral(load_measure(in_a), ener_s, ener_nodiag);
            std::cout << json{{"s", ener_s}, {"energy", v}, {"exclude_diagonal", ener_nodiag}}.dump() << "\n";
        } else if (*tub) {
            if (out_path.empty()) throw precondition_error("tube: --out base path is required");
            const WeightedMeasure m = load_measure(in_a);
            const double n = static_cast<double>(m.resolution());
            if (tub_dmin <= 0.0) tub_dmin = 1.0 / n;
            if (tub_dmax <= 0.0) tub_dmax = std::min(32.0 / n, 0.5);
            std::vector<double> deltas;
            for (int i = 0; i < tub_count; ++i) {
                const double f = tub_count == 1 ? 0.0 : static_cast<double>(i) / (tub_count - 1);
                deltas.push_back(std::exp(std::log(tub_dmax) + f * (std::log(tub_dmin) - std::log(tub_dmax))));
            }
            const auto dirs = unit_directions(m.dim(), tub_dirs, seed);
            const double s_f = tub_sf >= 0.0 ? tub_sf : frostman_fit(m).exponent;
            const TubeProfile tp = tube_profile(m, dirs, deltas, s_f);
            std::string csv = "direction,delta,mass\n";
            for (std::size_t di = 0; di < dirs.size(); ++di)
                for (double d : deltas)
                    csv += std::to_string(di) + "," + fmt17(d) + "," + fmt17(tube_mass(m, dirs[di], d)) + "\n";
            write_text(out_path + ".csv", csv);
            json samples = json::array();
            for (const auto& [d, mass] : tp.samples) samples.push_back(json::array({d, mass}));
            const json jj{{"exponent", tp.exponent}, {"l_f", tp.l_f},   {"s_f", s_f},
                          {"residual", tp.residual}, {"samples", samples}};
            write_text(out_path + ".json", jj.dump(2) + "\n");
            std::cout << jj.dump() << "\n";
        } else if (*pin) {
            if (out_path.empty()) throw precondition_error("pinned: --out is required");
            const GridSet dset = pinned_distances(load_grid_set(in_a), parse_doubles(pin_vec));
            save_grid_set(dset, out_path, format_for(out_path));
            std::cout << json{{"cells", dset.count()}, {"occupied_fraction", occupied_fraction(dset)}}.dump() << "\n";
        } else if (*chk) {
            ProjectionCondition c;
            c.s_e = Rational::parse(chk_se);
            c.s_f = Rational::parse(chk_sf);
            c.gamma_f = Rational::parse(chk_gamma);
            c.l_f = Rational::parse(chk_lf);
            c.alpha = Rational::parse(chk_alpha);
            c.d = chk_d;
            const ConditionCheck r = check_condition(c);
            const Rational alpha_star = best_alpha(c.s_e, c.s_f, c.gamma_f, c.l_f, c.d);
            json jj;
            jj["branch1"] = r.branch1_infinite ? json("inf") : json(r.branch1.str());
            jj["branch1_value"] = r.branch1_infinite ? std::numeric_limits<double>::infinity()
                                                     : r.branch1.to_double();
            jj["branch2"] = r.branch2.str();
            jj["branch2_value"] = r.branch2.to_double();
            jj["verdict"] = r.holds ? "holds" : "fails";
            jj["best_alpha"] = alpha_star.str();
            jj["best_alpha_value"] = alpha_star.to_double();
            std::cout << jj.dump() << "\n";
        } else if (*thr) {
            if (thr_json) {
                json rows = json::array();
                for (int d = 2; d <= thr_dmax; ++d)
                    for (int k = 1; k <= d; ++k) {
                        const Thresholds t = threshold_table(d, k);
                        rows.push_back(json{{"d", d},
                                            {"k", k},
                                            {"sum_product", t.sum_product.str()},
                                            {"falconer", t.falconer.str()},
                                            {"sphere_simplex", t.sphere_simplex.str()},
                                            {"euclidean_simplex", t.euclidean_simplex.str()}});
                    }
                std::cout << rows.dump(2) << "\n";
            } else {
                std::printf("%3s %3s %14s %10s %15s %18s\n", "d", "k", "sum-product", "falconer",
                            "sphere-simplex", "euclidean-simplex");
                for (int d = 2; d <= thr_dmax; ++d)
                    for (int k = 1; k <= d; ++k) {
                        const Thresholds t = threshold_table(d, k);
                        std::printf("%3d %3d %14s %10s %15s %18s\n", d, k, t.sum_product.str().c_str(),
                                    t.falconer.str().c_str(), t.sphere_simplex.str().c_str(),
                                    t.euclidean_simplex.str().c_str());
                    }
            }
        } else if (*simp) {
            if (out_path.empty()) throw precondition_error("simplex: --out base path is required");
            GridSet e = load_grid_set(in_a);
            if (!simp_center.empty()) {
                if (simp_radius <= 0.0) throw precondition_error("simplex: --sphere-radius required with --sphere-center");
                e = restrict_to_sphere(e, parse_doubles(simp_center), simp_radius);
                if (e.cells.empty()) throw precondition_error("simplex: sphere restriction left no cells");
            }
            const SimplexSpectrum sp = simplex_spectrum(e, simp_k, simp_samples, simp_bins, seed);
            const json jj{{"k", sp.k},
                          {"d", sp.dim},
                          {"M", sp.bin_resolution},
                          {"occupied", sp.occupied_bins},
                          {"samples", sp.sampled_tuples},
                          {"reachable_bins", sp.reachable_bins},
                          {"volume_estimate", sp.reachable_fraction},
                          {"box_fraction", sp.box_fraction},
                          {"diameter", sp.diameter}};
            write_text(out_path + ".json", jj.dump(2) + "\n");
            std::string csv = "samples,occupied\n";
            for (const auto& [s, occ] : sp.saturation_curve)
                csv += std::to_string(s) + "," + std::to_string(occ) + "\n";
            write_text(out_path + ".csv", csv);
            std::cout << jj.dump() << "\n";
        } else if (*swp) {
            if (out_path.empty()) throw precondition_error("sweep: --out base path is required");
            ExperimentConfig cfg = ExperimentConfig::load(in_a);
            if (swp_seed_override) cfg.seed = seed;
            const ExperimentReport report = run_sweep(cfg, threads);
            const auto files = emit_report(report, out_path, parse_formats(swp_formats), swp_timestamp);
            std::cout << json{{"rows", report.rows.size()}, {"files", files}}.dump() << "\n";
        } else if (*rep) {
            if (out_path.empty()) throw precondition_error("report: --out base path is required");
            const ExperimentReport report = ExperimentReport::load(in_a);
            const auto files = emit_report(report, out_path, parse_formats(rep_formats));
            std::cout << json{{"rows", report.rows.size()}, {"files", files}}.dump() << "\n";
        }
        return 0;
    } catch (const precondition_error& e) {
        std::cerr << "error (precondition): " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "error (resource): " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
