#include "lrl/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/parallel.hpp"

#ifndef LRL_VERSION
#define LRL_VERSION "0.1.0"
#endif

namespace lrl {
namespace {

constexpr std::uint64_t kHardyStream = 0x6861726479ULL;
constexpr std::uint64_t kRescaledStream = 0x7265736361ULL;
constexpr std::uint64_t kMeanSquareStream = 0x6d65616e73ULL;
constexpr std::uint64_t kOrientationStream = 0x6f7269656eULL;

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void bytes(const void* p, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= c[i];
            h *= 0x100000001b3ULL;
        }
    }
    void text(const std::string& s) { bytes(s.data(), s.size() + 1); }
    void real(double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        bytes(&bits, sizeof bits);
    }
};

std::optional<ExponentFit> try_fit(const GrowthSeries& s) {
    try {
        return fit_growth_exponent(s);
    } catch (const FitError&) {
        return std::nullopt;
    }
}

void finish_slopes(MotionGrowthResult& r) {
    std::vector<double> slopes;
    for (const auto& f : r.fits)
        if (f) slopes.push_back(f->slope);
    if (!slopes.empty()) {
        r.median_slope = median(slopes);
        r.max_slope = *std::max_element(slopes.begin(), slopes.end());
    }
}

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("T grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 1.0) || !std::isfinite(grid[i])) throw DomainError("T grid values must be finite and >= 1");
        if (i && !(grid[i] > grid[i - 1])) throw DomainError("T grid must be strictly increasing");
    }
}

}  // namespace

std::string library_version() { return LRL_VERSION; }

ExponentFit fit_growth_exponent(const GrowthSeries& series) {
    ExponentFit fit;
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : series.points) {
        if (p.value > 0.0 && p.T > 0.0 && std::isfinite(p.value))
            pts.emplace_back(std::log(p.T), std::log(p.value));
        else
            ++fit.excluded;
    }
    if (pts.size() < 3)
        throw FitError("fit '" + series.label + "' needs at least 3 positive points, got " + std::to_string(pts.size()));
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) mx += x, my += y;
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0.0) throw FitError("fit '" + series.label + "' needs distinct T values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    fit.n_points = static_cast<int>(pts.size());
    return fit;
}

std::vector<double> geometric_grid(double start, double ratio, int count) {
    if (!(start > 0.0) || !(ratio > 1.0) || count < 1) throw DomainError("geometric grid needs start > 0, ratio > 1, count >= 1");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = start * std::pow(ratio, i);
    return g;
}

double median(std::vector<double> values) {
    if (values.empty()) throw FitError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::shared_ptr<const EntrySpectrum> obtain_spectrum(const StarBody& body, const RigidMotion& motion, double t_max,
                                                     const ExperimentOptions& options) {
    if (!options.cache_dir) return std::make_shared<const EntrySpectrum>(entry_spectrum(body, motion, t_max, options.budget));
    Fnv1a key;
    key.text(format_body_spec(body));
    key.real(static_cast<double>(body.dimension()));
    key.real(motion.rotation.angle());
    for (double q : motion.rotation.quaternion()) key.real(q);
    for (double x : motion.translation) key.real(x);
    key.real(t_max);
    key.text(library_version());
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.lrspec", static_cast<unsigned long long>(key.h));
    const auto path = *options.cache_dir / name;
    if (std::filesystem::exists(path)) {
        try {
            auto spec = load_spectrum(path);
            if (spec.k == body.dimension() && spec.t_max == t_max) {
                spec.body_id = format_body_spec(body);
                spec.motion = motion;
                return std::make_shared<const EntrySpectrum>(std::move(spec));
            }
        } catch (const Error&) {
            // unreadable cache entries are rebuilt below
        }
    }
    auto spec = std::make_shared<const EntrySpectrum>(entry_spectrum(body, motion, t_max, options.budget));
    std::filesystem::create_directories(*options.cache_dir);
    save_spectrum(*spec, path);
    return spec;
}

std::vector<RigidMotion> haar_motions(int k, int n, std::uint64_t seed, std::uint64_t stream) {
    std::vector<RigidMotion> motions;
    motions.reserve(n);
    for (int i = 0; i < n; ++i) {
        CounterRng rng = CounterRng(seed, stream).substream(static_cast<std::uint64_t>(i));
        motions.push_back(haar_sample(k, rng));
    }
    return motions;
}

// ---------------------------------------------------------------------------

namespace {

template <class Value>
MotionGrowthResult motion_growth(const StarBody& body, const std::vector<RigidMotion>& motions,
                                 const std::vector<double>& grid, double t_max, const ExperimentOptions& options,
                                 Value&& value) {
    MotionGrowthResult r;
    r.body = format_body_spec(body);
    r.k = body.dimension();
    r.motions = motions;
    r.fits.resize(motions.size());
    for (std::size_t i = 0; i < motions.size(); ++i) {
        const int id = static_cast<int>(i);
        try {
            const RemainderProfile profile(obtain_spectrum(body, motions[i], t_max, options), body.volume());
            GrowthSeries series{"motion-" + std::to_string(id), {}};
            for (double T : grid) {
                const double v = value(profile, T);
                r.rows.push_back({id, T, v});
                series.points.push_back({T, v});
            }
            r.fits[i] = try_fit(series);
        } catch (const BudgetExceeded& e) {
            r.failures.push_back({id, e.what()});
        }
    }
    finish_slopes(r);
    return r;
}

}  // namespace

MotionGrowthResult hardy_experiment(const StarBody& body, const std::vector<RigidMotion>& motions,
                                    const std::vector<double>& T_grid, const ExperimentOptions& options) {
    check_grid(T_grid);
    return motion_growth(body, motions, T_grid, T_grid.back(), options,
                         [](const RemainderProfile& p, double T) { return hardy_average(p, T); });
}

MotionGrowthResult hardy_experiment(const StarBody& body, int n_motions, const std::vector<double>& T_grid,
                                    std::uint64_t seed, const ExperimentOptions& options) {
    if (n_motions < 1) throw DomainError("need at least one motion");
    auto r = hardy_experiment(body, haar_motions(body.dimension(), n_motions, seed, kHardyStream), T_grid, options);
    r.seed = seed;
    return r;
}

MotionGrowthResult rescaled_experiment(const StarBody& body, int h, int n_motions, const std::vector<double>& s_grid,
                                       std::uint64_t seed, const ExperimentOptions& options) {
    check_grid(s_grid);
    if (h < 2 || h % 2 != 0) throw DomainError("h must be an even integer >= 2");
    if (n_motions < 1) throw DomainError("need at least one motion");
    const auto motions = haar_motions(body.dimension(), n_motions, seed, kRescaledStream);
    auto r = motion_growth(body, motions, s_grid, std::pow(s_grid.back(), 1.0 / h) * (1.0 + 1e-12), options,
                           [h](const RemainderProfile& p, double s) { return rescaled_hardy_average(p, s, h); });
    r.seed = seed;
    return r;
}

std::string growth_csv(const MotionGrowthResult& result, const std::string& value_column) {
    std::ostringstream os;
    os << "motion_id,T," << value_column << '\n';
    for (const auto& row : result.rows)
        os << row.motion_id << ',' << format_double(row.T) << ',' << format_double(row.value) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------

GroupMeanSquareResult group_mean_square_experiment(const StarBody& body, std::uint64_t n_samples,
                                                   const std::vector<double>& T_grid, std::uint64_t seed,
                                                   const ExperimentOptions& options) {
    check_grid(T_grid);
    if (n_samples < 2) throw DomainError("need at least 2 samples per T");
    const int k = body.dimension();
    GroupMeanSquareResult r;
    r.body = format_body_spec(body);
    r.k = k;
    r.seed = seed;
    r.n_samples = n_samples;
    GrowthSeries series{"group-mean-square", {}};
    for (std::size_t j = 0; j < T_grid.size(); ++j) {
        const double T = T_grid[j];
        const double main_term = body.volume() * std::pow(T, k);
        const CounterRng base = CounterRng(seed, kMeanSquareStream).substream(j);
        std::vector<double> sq(n_samples);
        parallel_for(n_samples, [&](std::size_t i) {
            CounterRng rng = base.substream(i);
            const RigidMotion m = haar_sample(k, rng);
            const double rem = static_cast<double>(lattice_count(body, m, T, options.budget)) - main_term;
            sq[i] = rem * rem;
        });
        double sum = 0.0;
        for (double v : sq) sum += v;
        const double n = static_cast<double>(n_samples);
        const double mean = sum / n;
        double var = 0.0;
        for (double v : sq) var += (v - mean) * (v - mean);
        var /= (n - 1.0);
        r.rows.push_back({T, mean, std::sqrt(var / n)});
        series.points.push_back({T, mean});
    }
    // short grids are allowed; the fit then stays empty (n_points = 0)
    r.fit = try_fit(series).value_or(ExponentFit{});
    return r;
}

std::string mean_square_csv(const GroupMeanSquareResult& result) {
    std::ostringstream os;
    os << "T,estimate,std_error,n_samples\n";
    for (const auto& row : result.rows)
        os << format_double(row.T) << ',' << format_double(row.estimate) << ',' << format_double(row.std_error) << ','
           << result.n_samples << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

OrientationSeries orientation_series(const StarBody& body, const std::string& label, const RigidMotion& motion,
                                     const std::vector<double>& grid, const ExperimentOptions& options) {
    OrientationSeries s;
    s.label = label;
    s.motion = motion;
    const RemainderProfile profile(obtain_spectrum(body, motion, grid.back(), options), body.volume());
    GrowthSeries max_series{label + "-max", {}}, hardy_series{label + "-hardy", {}};
    for (double T : grid) {
        s.max_abs.push_back(max_abs_remainder(profile, T));
        s.hardy.push_back(hardy_average(profile, T));
        max_series.points.push_back({T, s.max_abs.back()});
        hardy_series.points.push_back({T, s.hardy.back()});
    }
    s.max_fit = fit_growth_exponent(max_series);
    s.hardy_fit = fit_growth_exponent(hardy_series);
    return s;
}

}  // namespace

OrientationComparison orientation_comparison(const StarBody& body, const std::vector<double>& T_grid,
                                             int n_rotations, std::uint64_t seed, const ExperimentOptions& options) {
    check_grid(T_grid);
    if (n_rotations < 1) throw DomainError("need at least one random rotation");
    const int k = body.dimension();
    OrientationComparison c;
    c.body = format_body_spec(body);
    c.T_grid = T_grid;
    c.identity = orientation_series(body, "identity", RigidMotion::identity(k), T_grid, options);
    std::vector<double> hardy_slopes, max_slopes;
    for (int i = 0; i < n_rotations; ++i) {
        CounterRng rng = CounterRng(seed, kOrientationStream).substream(static_cast<std::uint64_t>(i));
        const RigidMotion m = RigidMotion::make(haar_rotation(k, rng), {0.0, 0.0, 0.0});
        c.random.push_back(orientation_series(body, "haar-" + std::to_string(i), m, T_grid, options));
        hardy_slopes.push_back(c.random.back().hardy_fit.slope);
        max_slopes.push_back(c.random.back().max_fit.slope);
    }
    c.random_median_hardy_slope = median(hardy_slopes);
    c.random_median_max_slope = median(max_slopes);
    return c;
}

CounterexampleResult counterexample_experiment(std::uint64_t seed, const std::vector<double>& T_grid, int n_rotations,
                                               const ExperimentOptions& options) {
    CounterexampleResult r;
    r.seed = seed;
    r.flat = orientation_comparison(StarBody::pnorm_ball(4, 2), T_grid, n_rotations, seed, options);
    r.control = orientation_comparison(StarBody::ball(2), T_grid, n_rotations, seed, options);
    const auto& t = r.thresholds;
    r.identity_slope_ok = r.flat.identity.max_fit.slope >= t.min_identity_max_slope;
    r.random_slope_ok = r.flat.random_median_hardy_slope <= t.max_random_hardy_slope;
    r.delta_ok = r.flat.delta() >= t.min_delta;
    r.control_ok = std::abs(r.control.delta()) <= t.max_control_delta;
    return r;
}

std::string counterexample_csv(const CounterexampleResult& result) {
    std::ostringstream os;
    os << "body,orientation,T,max_abs_remainder,hardy_average\n";
    for (const auto* c : {&result.flat, &result.control}) {
        auto emit = [&](const OrientationSeries& s) {
            for (std::size_t i = 0; i < c->T_grid.size(); ++i)
                os << c->body << ',' << s.label << ',' << format_double(c->T_grid[i]) << ','
                   << format_double(s.max_abs[i]) << ',' << format_double(s.hardy[i]) << '\n';
        };
        emit(c->identity);
        for (const auto& s : c->random) emit(s);
    }
    return os.str();
}

// ---------------------------------------------------------------------------

EigenvalueCountResult eigenvalue_count_experiment(const StarBody& body, const std::vector<double>& lambda_grid,
                                                  const RigidMotion& motion, const ExperimentOptions& options) {
    if (body.kind() != BodyKind::PolynomialSublevel) throw BodyInvalid("eigenvalue counting needs a poly body");
    if (lambda_grid.empty()) throw DomainError("Lambda grid is empty");
    const int h = std::get<PolynomialSublevel>(body.shape()).degree;
    const int k = body.dimension();
    const double scale = std::pow(2.0 * std::numbers::pi, h);
    EigenvalueCountResult r;
    r.body = format_body_spec(body);
    r.degree = h;
    r.motion = motion;
    r.target = (k - 1) / (2.0 * h);
    double t_max = 0.0;
    for (double L : lambda_grid) {
        if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("Lambda values must be positive");
        t_max = std::max(t_max, std::pow(L / scale, 1.0 / h));
    }
    const RemainderProfile profile(obtain_spectrum(body, motion, t_max, options), body.volume());
    GrowthSeries series{"rescaled", {}};
    for (double L : lambda_grid) {
        EigenvalueRow row;
        row.lambda = L;
        row.s = L / scale;
        row.T = std::min(std::pow(row.s, 1.0 / h), t_max);
        row.count = count_at(profile.spectrum(), row.T);
        row.remainder = static_cast<double>(row.count) - body.volume() * std::pow(row.s, static_cast<double>(k) / h);
        row.boundary_ties = boundary_ties(profile.spectrum(), row.T);
        if (row.s >= 1.0 && std::pow(row.s, 1.0 / h) <= t_max) {
            row.rescaled_average = rescaled_hardy_average(profile, row.s, h);
            series.points.push_back({row.s, row.rescaled_average});
        } else {
            row.rescaled_average = std::numeric_limits<double>::quiet_NaN();
        }
        r.rows.push_back(row);
    }
    r.fit = try_fit(series);
    return r;
}

std::string eigenvalue_csv(const EigenvalueCountResult& result) {
    std::ostringstream os;
    os << "lambda,T,s,count,remainder,rescaled_average,boundary_ties\n";
    for (const auto& row : result.rows)
        os << format_double(row.lambda) << ',' << format_double(row.T) << ',' << format_double(row.s) << ','
           << row.count << ',' << format_double(row.remainder) << ','
           << (std::isnan(row.rescaled_average) ? std::string() : format_double(row.rescaled_average)) << ','
           << row.boundary_ties << '\n';
    return os.str();
}

}  // namespace lrl
