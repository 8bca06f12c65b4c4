#pragma once

#include <memory>

#include "lrl/counting.hpp"

namespace lrl {

/// R(t) = N(t) - V t^k held piecewise: between consecutive entry radii N is
/// constant and R is a decreasing polynomial in t, so every integral below is
/// evaluated in closed form piece by piece.
class RemainderProfile {
public:
    RemainderProfile(std::shared_ptr<const EntrySpectrum> spectrum, double volume);

    const EntrySpectrum& spectrum() const noexcept { return *spectrum_; }
    double volume() const noexcept { return volume_; }
    int dimension() const noexcept { return spectrum_->k; }
    double t_max() const noexcept { return spectrum_->t_max; }

private:
    std::shared_ptr<const EntrySpectrum> spectrum_;
    double volume_;
};

/// Convenience: enumerate and wrap in one step.
RemainderProfile make_profile(const StarBody& body, const RigidMotion& motion, double t_max,
                              std::uint64_t budget = kDefaultEnumerationBudget);

double remainder_at(const RemainderProfile& profile, double t);

/// int_lo^hi |R(t)| dt for 0 <= lo <= hi <= t_max.
double abs_integral_over(const RemainderProfile& profile, double lo, double hi);
/// int_lo^hi R(t)^2 dt.
double square_integral_over(const RemainderProfile& profile, double lo, double hi);

/// int_1^T |R(t)| dt.
double abs_integral(const RemainderProfile& profile, double T);
/// int_1^T R(t)^2 dt.
double square_integral(const RemainderProfile& profile, double T);
/// (1/T) int_1^T |R(t)| dt.
double hardy_average(const RemainderProfile& profile, double T);

/// (1/T) int_1^T |R(s^{1/h})| ds for even h >= 2, evaluated piecewise in t
/// with ds = h t^{h-1} dt. Needs T^{1/h} <= t_max.
double rescaled_hardy_average(const RemainderProfile& profile, double T, int h);

/// sup over t in [1, T] of |R(t)|. R decreases between jumps, so only the
/// post-jump values and the pre-jump limits are candidates.
double max_abs_remainder(const RemainderProfile& profile, double T);

}  // namespace lrl
