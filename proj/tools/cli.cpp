#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/experiments.hpp"
#include "lrl/fourier.hpp"
#include "lrl/parallel.hpp"
#include "lrl/report.hpp"

namespace lrl::cli {
namespace {

using nlohmann::ordered_json;

struct Rule {
    std::string name;
    std::string status;  // pass, fail or inconclusive
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::string note;
};

Rule band_rule(std::string name, double value, double lo, double hi, bool conclusive, std::string note = {}) {
    Rule r{std::move(name), "", value, lo, hi, std::move(note)};
    r.status = !conclusive ? "inconclusive" : (value >= lo && value <= hi ? "pass" : "fail");
    return r;
}

Rule flag_rule(std::string name, bool ok, double value, double lo, double hi, std::string note = {}) {
    return {std::move(name), ok ? "pass" : "fail", value, lo, hi, std::move(note)};
}

ordered_json fit_json(const std::string& label, const ExponentFit& f) {
    return {{"label", label},           {"slope", f.slope},       {"intercept", f.intercept},
            {"r_squared", f.r_squared}, {"n_points", f.n_points}, {"excluded", f.excluded},
            {"status", f.conclusive() ? "conclusive" : "inconclusive"}};
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw DomainError(std::string("--") + what + ": '" + item + "' is not a number");
        }
    }
    return v;
}

RigidMotion parse_motion(const RunConfig& c) {
    const int k = c.k;
    Rotation rot = Rotation::identity(k);
    if (!c.theta.empty()) {
        const auto t = parse_list(c.theta, "theta");
        if (k == 2) {
            if (t.size() != 1) throw DomainError("--theta takes one angle for k=2");
            rot = Rotation::from_angle(t[0]);
        } else {
            if (t.size() != 4) throw DomainError("--theta takes a quaternion w,x,y,z for k=3");
            rot = Rotation::from_quaternion({t[0], t[1], t[2], t[3]});
        }
    }
    Vec3 x{0.0, 0.0, 0.0};
    if (!c.x.empty()) {
        const auto v = parse_list(c.x, "x");
        if (static_cast<int>(v.size()) != k) throw DomainError("--x needs " + std::to_string(k) + " coordinates");
        for (int i = 0; i < k; ++i) x[i] = v[i];
    }
    return RigidMotion::make(rot, x);
}

void require_positive(const RunConfig& c) {
    auto pos = [](const auto& o, const char* name) {
        if (o && !(*o > 0)) throw DomainError(std::string("--") + name + " must be positive");
    };
    pos(c.t_start, "t-start");
    pos(c.t_ratio, "t-ratio");
    pos(c.t_count, "t-count");
    pos(c.T, "T");
    pos(c.motions, "motions");
    pos(c.samples, "samples");
    pos(c.rotations, "rotations");
    pos(c.n_max, "n-max");
    pos(c.directions, "directions");
    pos(c.r_min, "r-min");
    pos(c.r_max, "r-max");
    pos(c.radii, "radii");
    pos(c.threads, "threads");
    pos(c.budget, "budget");
    if (c.k != 2 && c.k != 3) throw DomainError("--k must be 2 or 3");
}

// Per-experiment defaults for the grid and sample counts.
void fill_defaults(RunConfig& c, const StarBody& body) {
    const std::string& e = c.experiment;
    auto grid = [&](double start, double ratio, int count) {
        if (!c.t_start) c.t_start = start;
        if (!c.t_ratio) c.t_ratio = ratio;
        if (!c.t_count) c.t_count = count;
    };
    if (e == "hardy") grid(50, 2, c.k == 2 ? 6 : 4);
    if (e == "mean-square") grid(c.k == 2 ? 10 : 8, 2, c.k == 2 ? 6 : 5);
    if (e == "rescaled") grid(2500, 4, 6);
    if (e == "counterexample") grid(100, 2, 6);
    if (e == "eigen") grid(std::pow(2.0 * std::numbers::pi, c.h) * 2500, 4, 6);
    if (e == "parseval") grid(10, 2, 3);
    if (e == "hardy" || e == "rescaled") c.motions = c.motions.value_or(e == "hardy" ? 16 : 8);
    if (e == "mean-square") c.samples = c.samples.value_or(256);
    if (e == "parseval") {
        c.samples = c.samples.value_or(4000);
        const bool closed = body.kind() == BodyKind::Ball || body.kind() == BodyKind::Ellipsoid;
        c.n_max = c.n_max.value_or(closed ? 200 : 16);
    }
    if (e == "counterexample") c.rotations = c.rotations.value_or(8);
    if (e == "decay") {
        c.directions = c.directions.value_or(c.k == 2 ? 64 : 128);
        c.r_min = c.r_min.value_or(10.0);
        c.r_max = c.r_max.value_or(100.0);
        c.radii = c.radii.value_or(256);
    }
    if ((e == "count" || e == "spectrum") && !c.T) throw DomainError("--T is required for " + e);
    c.budget = c.budget.value_or(kDefaultEnumerationBudget);
}

ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["experiment"] = c.experiment;
    j["body"] = c.body;
    j["k"] = c.k;
    auto opt = [&](const char* key, const auto& o) {
        if (o) j[key] = *o;
    };
    opt("t_start", c.t_start);
    opt("t_ratio", c.t_ratio);
    opt("t_count", c.t_count);
    opt("T", c.T);
    opt("motions", c.motions);
    opt("samples", c.samples);
    opt("rotations", c.rotations);
    j["seed"] = c.seed;
    if (!c.theta.empty()) j["theta"] = c.theta;
    if (!c.x.empty()) j["x"] = c.x;
    j["degree"] = c.h;
    opt("n_max", c.n_max);
    opt("directions", c.directions);
    opt("r_min", c.r_min);
    opt("r_max", c.r_max);
    opt("radii", c.radii);
    opt("budget", c.budget);
    if (!c.cache.empty()) j["cache"] = c.cache;
    return j;
}

std::string rule_status(const std::vector<Rule>& rules) {
    bool inconclusive = false;
    for (const auto& r : rules) {
        if (r.status == "fail") return "fail";
        inconclusive |= r.status == "inconclusive";
    }
    return inconclusive ? "inconclusive" : "pass";
}

struct Outcome {
    std::string csv;
    ordered_json fits = ordered_json::array();
    std::vector<Rule> rules;
    ordered_json details = ordered_json::object();
};

Rule median_rule(const MotionGrowthResult& r, double lo, double hi) {
    int conclusive = 0, fitted = 0;
    for (const auto& f : r.fits)
        if (f) ++fitted, conclusive += f->conclusive();
    if (fitted == 0) return {"median_slope_in_band", "inconclusive", 0.0, lo, hi, "no motion produced a fit"};
    return band_rule("median_slope_in_band", r.median_slope, lo, hi, 2 * conclusive > fitted,
                     std::to_string(conclusive) + " of " + std::to_string(fitted) + " fits conclusive");
}

void growth_fits(Outcome& o, const MotionGrowthResult& r) {
    for (std::size_t i = 0; i < r.fits.size(); ++i)
        if (r.fits[i]) o.fits.push_back(fit_json("motion-" + std::to_string(i), *r.fits[i]));
    o.details["median_slope"] = r.median_slope;
    o.details["max_slope"] = r.max_slope;
    o.details["partial"] = r.partial();
    auto fails = ordered_json::array();
    for (const auto& f : r.failures) fails.push_back({{"motion_id", f.motion_id}, {"message", f.message}});
    o.details["failures"] = fails;
}

ordered_json series_json(const OrientationComparison& c) {
    auto list = ordered_json::array();
    list.push_back(fit_json(c.identity.label + "-max", c.identity.max_fit));
    list.push_back(fit_json(c.identity.label + "-hardy", c.identity.hardy_fit));
    for (const auto& s : c.random) {
        list.push_back(fit_json(s.label + "-max", s.max_fit));
        list.push_back(fit_json(s.label + "-hardy", s.hardy_fit));
    }
    return {{"body", c.body},
            {"identity_max_slope", c.identity.max_fit.slope},
            {"identity_hardy_slope", c.identity.hardy_fit.slope},
            {"random_median_hardy_slope", c.random_median_hardy_slope},
            {"random_median_max_slope", c.random_median_max_slope},
            {"delta", c.delta()},
            {"delta_max_vs_max", c.identity.max_fit.slope - c.random_median_max_slope},
            {"delta_hardy_vs_hardy", c.identity.hardy_fit.slope - c.random_median_hardy_slope},
            {"fits", list}};
}

Outcome execute(const RunConfig& c, const StarBody& body, std::ostream& out) {
    Outcome o;
    const int k = c.k;
    ExperimentOptions opts;
    opts.budget = *c.budget;
    if (!c.cache.empty()) opts.cache_dir = std::filesystem::path(c.cache);
    const std::string& e = c.experiment;
    auto grid = [&] { return geometric_grid(*c.t_start, *c.t_ratio, *c.t_count); };

    if (e == "count") {
        const auto motion = parse_motion(c);
        const auto n = lattice_count(body, motion, *c.T, opts.budget);
        const double main = body.volume() * std::pow(*c.T, k);
        out << "N=" << n << "\nR=" << format_double(static_cast<double>(n) - main)
            << "\nvol*T^k=" << format_double(main) << '\n';
        o.csv = "T,count,remainder,main_term\n" + format_double(*c.T) + ',' + std::to_string(n) + ',' +
                format_double(static_cast<double>(n) - main) + ',' + format_double(main) + '\n';
    } else if (e == "spectrum") {
        const auto spec = obtain_spectrum(body, parse_motion(c), *c.T, opts);
        std::filesystem::create_directories(c.out);
        save_spectrum(*spec, std::filesystem::path(c.out) / "spectrum.lrspec");
        o.csv = "entry_radius\n";
        for (double r : spec->radii) o.csv += format_double(r) + '\n';
        o.details["count"] = spec->radii.size();
    } else if (e == "hardy") {
        const auto r = c.theta.empty() && c.x.empty()
                           ? hardy_experiment(body, *c.motions, grid(), c.seed, opts)
                           : hardy_experiment(body, std::vector<RigidMotion>{parse_motion(c)}, grid(), opts);
        o.csv = growth_csv(r, "hardy_average");
        growth_fits(o, r);
        const double target = (k - 1) / 2.0, half = k == 2 ? 0.15 : 0.2;
        o.rules.push_back(median_rule(r, target - half, target + half));
        if (k == 2) o.rules.push_back(flag_rule("max_slope_at_most_1", r.max_slope <= 1.0, r.max_slope, 0.0, 1.0));
    } else if (e == "rescaled") {
        const auto r = rescaled_experiment(body, c.h, *c.motions, grid(), c.seed, opts);
        o.csv = growth_csv(r, "rescaled_average");
        growth_fits(o, r);
        const double target = (k - 1) / (2.0 * c.h);
        o.rules.push_back(median_rule(r, target - 0.1, target + 0.1));
    } else if (e == "mean-square") {
        const auto r = group_mean_square_experiment(body, *c.samples, grid(), c.seed, opts);
        o.csv = mean_square_csv(r);
        o.fits.push_back(fit_json("mean-square", r.fit));
        const double target = k - 1, half = k == 2 ? 0.2 : 0.3;
        o.rules.push_back(band_rule("slope_in_band", r.fit.slope, target - half, target + half, r.fit.conclusive()));
    } else if (e == "counterexample") {
        const auto r = counterexample_experiment(c.seed, grid(), *c.rotations, opts);
        o.csv = counterexample_csv(r);
        o.details["flat"] = series_json(r.flat);
        o.details["control"] = series_json(r.control);
        const auto& t = r.thresholds;
        const char* cal = "calibration threshold";
        o.rules.push_back(flag_rule("identity_max_slope", r.identity_slope_ok, r.flat.identity.max_fit.slope,
                                    t.min_identity_max_slope, 1.0, cal));
        o.rules.push_back(flag_rule("random_median_hardy_slope", r.random_slope_ok, r.flat.random_median_hardy_slope,
                                    0.0, t.max_random_hardy_slope, cal));
        o.rules.push_back(flag_rule("flat_delta", r.delta_ok, r.flat.delta(), t.min_delta, 1.0, cal));
        o.rules.push_back(flag_rule("control_delta", r.control_ok, r.control.delta(), -t.max_control_delta,
                                    t.max_control_delta, cal));
    } else if (e == "eigen") {
        if (body.kind() != BodyKind::PolynomialSublevel)
            throw BodyInvalid("eigen needs a poly body, e.g. --body poly:2:1,0,1");
        const auto r = eigenvalue_count_experiment(body, grid(), parse_motion(c), opts);
        o.csv = eigenvalue_csv(r);
        o.details["target"] = r.target;
        if (r.fit) {
            o.fits.push_back(fit_json("rescaled", *r.fit));
            o.rules.push_back(
                band_rule("slope_in_band", r.fit->slope, r.target - 0.1, r.target + 0.1, r.fit->conclusive()));
        } else {
            o.rules.push_back({"slope_in_band", "inconclusive", 0.0, r.target - 0.1, r.target + 0.1,
                               "fewer than 3 grid points with s >= 1"});
        }
    } else if (e == "decay") {
        const auto env = decay_envelope(body, *c.directions, *c.r_min, *c.r_max, *c.radii);
        o.csv = decay_csv(env);
        auto lp = ordered_json::array();
        for (auto [p, v] : lp_report(env, {2.0, 4.0, 8.0, 16.0})) lp.push_back({{"p", p}, {"norm", v}});
        o.details["lp"] = lp;
        const auto [lo_it, hi_it] = std::minmax_element(env.psi.begin(), env.psi.end());
        o.details["psi_min"] = *lo_it;
        o.details["psi_max"] = *hi_it;
        if (body.kind() == BodyKind::Ball) {
            const double spread = (*hi_it - *lo_it) / *hi_it;
            o.rules.push_back(flag_rule("psi_constant_within_5pct", spread <= 0.05, spread, 0.0, 0.05));
            if (k == 2) o.rules.push_back(flag_rule("psi_at_most_0.36", *hi_it <= 0.36, *hi_it, 0.0, 0.36));
        }
        if (body.kind() == BodyKind::PNormBall && std::get<PNormBall>(body.shape()).p >= 4) {
            // flat points sit on the axes, so the envelope should peak there
            const Vec3& u = env.directions[static_cast<std::size_t>(hi_it - env.psi.begin())];
            double axis = 0.0;
            for (int i = 0; i < k; ++i) axis = std::max(axis, std::abs(u[i]));
            const double need = k == 2 ? std::cos(std::numbers::pi / *c.directions) : 0.95;
            o.rules.push_back(flag_rule("psi_max_on_axis", axis >= need, axis, need, 1.0,
                                        "largest |coordinate| of the argmax direction"));
        }
    } else if (e == "parseval") {
        const auto motion = parse_motion(c);
        std::vector<ParsevalCheck> checks;
        for (double T : grid()) checks.push_back(parseval_check(body, motion.rotation, T, *c.n_max, *c.samples, c.seed));
        o.csv = parseval_csv(checks);
        for (const auto& p : checks)
            o.rules.push_back(flag_rule("agree_T=" + format_double(p.T), p.pass, p.difference, 0.0, p.allowance,
                                        "|mc - spectral| <= 4 se + tail"));
    }
    return o;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"count",          "spectrum", "hardy", "rescaled", "mean-square",
                                                "counterexample", "eigen",    "decay", "parseval"};
    return names;
}

int run(RunConfig config, std::ostream& out, std::ostream& err) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), config.experiment) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        err << "error: unknown experiment '" << config.experiment << "' (expected one of: " << list << ")\n";
        return kExitError;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        require_positive(config);
        if (config.threads) set_worker_count(*config.threads);
        StarBody body = [&] {
            try {
                return parse_body_spec(config.body, config.k);
            } catch (const ParseError& e) {
                throw Error("invalid body spec '" + config.body + "': " + e.what());
            }
        }();
        fill_defaults(config, body);
        const Outcome o = execute(config, body, out);

        const std::filesystem::path dir(config.out);
        atomic_write(dir / (config.experiment + ".csv"), o.csv);

        const ordered_json cfg = config_json(config);
        ordered_json rules = ordered_json::array();
        for (const auto& r : o.rules)
            rules.push_back({{"name", r.name},
                             {"status", r.status},
                             {"value", r.value},
                             {"band", {r.lo, r.hi}},
                             {"note", r.note}});
        const std::string status = rule_status(o.rules);
        ordered_json summary;
        summary["schema"] = "lrl-summary/1";
        summary["experiment"] = config.experiment;
        summary["config"] = cfg;
        summary["config_hash"] = fnv1a_hex(cfg.dump());
        summary["fits"] = o.fits;
        summary["rules"] = rules;
        summary["status"] = status;
        summary["details"] = o.details;
        summary["reproducibility"] = {
            {"version", library_version()},
            {"seed", config.seed},
            {"threads", worker_count()},
            {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
        atomic_write(dir / (config.experiment + ".summary.json"), summary.dump(2) + "\n");

        for (const auto& r : o.rules)
            err << r.status << ": " << r.name << " = " << format_double(r.value) << " in [" << format_double(r.lo)
                << ", " << format_double(r.hi) << "]\n";
        return status == "fail" ? kExitAcceptance : kExitPass;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << " (raise --budget or lower T)\n";
    } catch (const BodyInvalid& e) {
        err << "error: invalid body: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: cannot write output: " << e.what() << '\n';
    }
    return kExitError;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact lattice-point remainder experiments", "lrl"};
    RunConfig c;
    std::string names;
    for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;
    app.add_option("experiment", c.experiment, "one of: " + names)->required();
    app.add_option("--body", c.body, "ball | ellipsoid:a1,a2[,a3] | pball:p | poly:h:c0,...,ch");
    app.add_option("--k", c.k, "dimension, 2 or 3");
    app.add_option("--t-start", c.t_start, "first grid value");
    app.add_option("--t-ratio", c.t_ratio, "grid ratio");
    app.add_option("--t-count", c.t_count, "grid length");
    app.add_option("--T", c.T, "dilation for count / spectrum");
    app.add_option("--motions", c.motions, "Haar motions (hardy, rescaled)");
    app.add_option("--samples", c.samples, "Monte Carlo samples (mean-square, parseval)");
    app.add_option("--rotations", c.rotations, "random rotations (counterexample)");
    app.add_option("--seed", c.seed, "64-bit seed");
    app.add_option("--theta", c.theta, "rotation: angle (k=2) or quaternion w,x,y,z (k=3)");
    app.add_option("--x", c.x, "translation, comma-separated");
    app.add_option("--degree", c.h, "degree h for rescaled averages and eigen");
    app.add_option("--n-max", c.n_max, "frequency cutoff (parseval)");
    app.add_option("--directions", c.directions, "directions (decay)");
    app.add_option("--r-min", c.r_min, "smallest radius (decay)");
    app.add_option("--r-max", c.r_max, "largest radius (decay)");
    app.add_option("--radii", c.radii, "radii per direction (decay)");
    app.add_option("--out", c.out, "output directory");
    app.add_option("--threads", c.threads, "worker threads (default: LRL_THREADS or all cores)");
    app.add_option("--budget", c.budget, "cap on candidate lattice points per enumeration");
    app.add_option("--cache", c.cache, "spectrum cache directory");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return run(std::move(c), out, err);
}

}  // namespace lrl::cli
