#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lrl/remainder.hpp"
#include "lrl/spectral.hpp"

namespace lrl {

struct GrowthPoint {
    double T = 0.0;
    double value = 0.0;
};

struct GrowthSeries {
    std::string label;
    std::vector<GrowthPoint> points;
};

/// Least-squares slope of log(value) against log(T). Points with value <= 0
/// are dropped and counted in `excluded`.
struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
    int excluded = 0;

    /// Fits with r^2 < 0.5 are reported as inconclusive rather than pass/fail.
    bool conclusive() const noexcept { return r_squared >= 0.5; }
};

ExponentFit fit_growth_exponent(const GrowthSeries& series);

/// start * ratio^i for i in [0, count).
std::vector<double> geometric_grid(double start, double ratio, int count);

double median(std::vector<double> values);

/// Shared knobs for the experiments.
struct ExperimentOptions {
    std::uint64_t budget = kDefaultEnumerationBudget;
    /// When set, entry spectra are read from / written to this directory.
    std::optional<std::filesystem::path> cache_dir;
};

/// Entry spectrum through the optional cache. The cache key hashes the
/// canonical body text, the motion bits, t_max and the library version.
std::shared_ptr<const EntrySpectrum> obtain_spectrum(const StarBody& body, const RigidMotion& motion, double t_max,
                                                     const ExperimentOptions& options);

std::string library_version();

// ---------------------------------------------------------------------------

struct MotionFailure {
    int motion_id = 0;
    std::string message;
};

struct HardyRow {
    int motion_id = 0;
    double T = 0.0;
    double value = 0.0;
};

/// Per-motion growth of an average of |R| over a T grid.
struct MotionGrowthResult {
    std::string body;
    int k = 2;
    std::uint64_t seed = 0;
    std::vector<RigidMotion> motions;
    std::vector<HardyRow> rows;
    std::vector<std::optional<ExponentFit>> fits;  // one per motion
    std::vector<MotionFailure> failures;
    double median_slope = 0.0;
    double max_slope = 0.0;
    bool partial() const noexcept { return !failures.empty(); }
};

/// Motion i is haar_sample(k, CounterRng(seed, stream, i)) with a fixed
/// stream per experiment, unless `motions` is given explicitly.
std::vector<RigidMotion> haar_motions(int k, int n, std::uint64_t seed, std::uint64_t stream);

/// Exact Hardy averages (1/T) int_1^T |R| on T_grid for each motion, one
/// spectrum per motion at t_max = max T. Budget failures skip the motion.
MotionGrowthResult hardy_experiment(const StarBody& body, int n_motions, const std::vector<double>& T_grid,
                                    std::uint64_t seed, const ExperimentOptions& options = {});
MotionGrowthResult hardy_experiment(const StarBody& body, const std::vector<RigidMotion>& motions,
                                    const std::vector<double>& T_grid, const ExperimentOptions& options = {});

/// (1/S) int_1^S |R(s^{1/h})| ds on an s-grid.
MotionGrowthResult rescaled_experiment(const StarBody& body, int h, int n_motions, const std::vector<double>& s_grid,
                                       std::uint64_t seed, const ExperimentOptions& options = {});

std::string growth_csv(const MotionGrowthResult& result, const std::string& value_column);

// ---------------------------------------------------------------------------

struct MeanSquareRow {
    double T = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
};

struct GroupMeanSquareResult {
    std::string body;
    int k = 2;
    std::uint64_t seed = 0;
    std::uint64_t n_samples = 0;
    std::vector<MeanSquareRow> rows;
    ExponentFit fit;  // n_points = 0 when the grid is too short to fit
};

/// Haar Monte Carlo over (theta, x) of |R(T, theta, x)|^2, exact counts.
GroupMeanSquareResult group_mean_square_experiment(const StarBody& body, std::uint64_t n_samples,
                                                   const std::vector<double>& T_grid, std::uint64_t seed,
                                                   const ExperimentOptions& options = {});

std::string mean_square_csv(const GroupMeanSquareResult& result);

// ---------------------------------------------------------------------------

struct OrientationSeries {
    std::string label;  // "identity" or "haar-<i>"
    RigidMotion motion = RigidMotion::identity(2);
    std::vector<double> max_abs;  // sup_{t<=T} |R(t)| per grid T
    std::vector<double> hardy;    // (1/T) int_1^T |R| per grid T
    ExponentFit max_fit;
    ExponentFit hardy_fit;
};

struct OrientationComparison {
    std::string body;
    std::vector<double> T_grid;
    OrientationSeries identity;
    std::vector<OrientationSeries> random;
    double random_median_hardy_slope = 0.0;
    double random_median_max_slope = 0.0;
    /// identity max-|R| slope minus random median Hardy slope
    double delta() const noexcept { return identity.max_fit.slope - random_median_hardy_slope; }
};

struct CounterexampleThresholds {
    double min_identity_max_slope = 0.65;
    double max_random_hardy_slope = 0.6;
    double min_delta = 0.1;
    double max_control_delta = 0.1;
};

struct CounterexampleResult {
    std::uint64_t seed = 0;
    OrientationComparison flat;     // superellipse p = 4
    OrientationComparison control;  // disk
    CounterexampleThresholds thresholds;
    bool identity_slope_ok = false;
    bool random_slope_ok = false;
    bool delta_ok = false;
    bool control_ok = false;
    bool pass() const noexcept { return identity_slope_ok && random_slope_ok && delta_ok && control_ok; }
};

/// x = 0 throughout. Identity orientation versus n_rotations Haar rotations.
OrientationComparison orientation_comparison(const StarBody& body, const std::vector<double>& T_grid,
                                             int n_rotations, std::uint64_t seed,
                                             const ExperimentOptions& options = {});

CounterexampleResult counterexample_experiment(std::uint64_t seed, const std::vector<double>& T_grid,
                                               int n_rotations = 8, const ExperimentOptions& options = {});

std::string counterexample_csv(const CounterexampleResult& result);

// ---------------------------------------------------------------------------

struct EigenvalueRow {
    double lambda = 0.0;
    double T = 0.0;  // dilation (Lambda / (2 pi)^h)^{1/h}
    double s = 0.0;  // T^h
    std::uint64_t count = 0;
    double remainder = 0.0;         // count - V s^{k/h}
    double rescaled_average = 0.0;  // (1/s) int_1^s |R(s'^{1/h})| ds'
    std::uint64_t boundary_ties = 0;
};

struct EigenvalueCountResult {
    std::string body;
    int degree = 2;
    RigidMotion motion = RigidMotion::identity(2);
    std::vector<EigenvalueRow> rows;
    std::optional<ExponentFit> fit;  // rescaled average against s, target (k-1)/(2h)
    double target = 0.0;
};

/// Eigenvalues (2 pi)^h P(n) of the constant-coefficient operator P(d/dx) on
/// the torus (up to sign) counted through the lattice points of dilates of
/// {P <= 1}. `body` must be a PolynomialSublevel.
EigenvalueCountResult eigenvalue_count_experiment(const StarBody& body, const std::vector<double>& lambda_grid,
                                                  const RigidMotion& motion, const ExperimentOptions& options = {});

std::string eigenvalue_csv(const EigenvalueCountResult& result);

}  // namespace lrl
