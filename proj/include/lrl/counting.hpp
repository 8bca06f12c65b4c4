#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lrl/geometry.hpp"

namespace lrl {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 200'000'000;

/// Sorted entry radii t_m = gauge(theta^{-1}(m - x)) of all lattice points
/// m with t_m <= t_max. N(t) = #{radii <= t} for t <= t_max.
struct EntrySpectrum {
    std::string body_id;
    RigidMotion motion = RigidMotion::identity(2);
    int k = 2;
    double t_max = 0.0;
    std::vector<double> radii;

    std::uint64_t count_at_tmax() const noexcept { return radii.size(); }
};

/// Number of lattice points inside the circumscribed ball |m - x| <= t R,
/// i.e. the work an enumeration at dilation t performs.
std::uint64_t candidate_count(const StarBody& body, const RigidMotion& motion, double t);

/// Enumerates every lattice point with entry radius <= t_max. Throws
/// BudgetExceeded when the candidate count exceeds `budget`.
EntrySpectrum entry_spectrum(const StarBody& body, const RigidMotion& motion, double t_max,
                             std::uint64_t budget = kDefaultEnumerationBudget);

/// N(t) for t <= t_max (closed body: radii equal to t are counted).
std::uint64_t count_at(const EntrySpectrum& spectrum, double t);

/// N(T, theta, x) by a direct scan at one dilation. Points inside the
/// inscribed ball are counted without evaluating the gauge.
std::uint64_t lattice_count(const StarBody& body, const RigidMotion& motion, double T,
                            std::uint64_t budget = kDefaultEnumerationBudget);

/// Radii within `rel` relative distance of t: counts that are sensitive to
/// rounding in the boundary decision.
std::uint64_t boundary_ties(const EntrySpectrum& spectrum, double t, double rel = 1e-9);

/// Binary spectrum dump, little-endian:
///   char[8]  "LRSPEC1\0"
///   uint32   k
///   uint32   reserved (0)
///   float64  t_max
///   uint64   count
///   float64  radii[count]   (ascending)
void save_spectrum(const EntrySpectrum& spectrum, const std::filesystem::path& path);

/// Reads a dump written by save_spectrum. body_id and motion are not part of
/// the format and are left at their defaults.
EntrySpectrum load_spectrum(const std::filesystem::path& path);

}  // namespace lrl
