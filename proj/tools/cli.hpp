#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lrl::cli {

/// Exit statuses of `lrl`.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAcceptance = 2;

/// Experiment names accepted on the command line.
const std::vector<std::string>& experiment_names();

/// Everything a run depends on. Unset optionals take per-experiment defaults,
/// which are filled in before the config is echoed to the summary.
struct RunConfig {
    std::string experiment;
    std::string body = "ball";
    int k = 2;
    std::optional<double> t_start;
    std::optional<double> t_ratio;
    std::optional<int> t_count;
    std::optional<double> T;
    std::optional<int> motions;
    std::optional<std::uint64_t> samples;
    std::optional<int> rotations;
    std::uint64_t seed = 7;
    std::string theta;  // k = 2 angle in radians, k = 3 quaternion "w,x,y,z"
    std::string x;      // comma-separated translation
    int h = 2;
    std::optional<int> n_max;
    std::optional<int> directions;
    std::optional<double> r_min;
    std::optional<double> r_max;
    std::optional<int> radii;
    std::string out = "lrl-out";
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> budget;
    std::string cache;  // spectrum cache directory, empty = off
};

/// Runs one experiment and writes `<out>/<experiment>.csv` plus
/// `<out>/<experiment>.summary.json`. `count` prints to `out` instead.
int run(RunConfig config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and calls run().
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrl::cli
