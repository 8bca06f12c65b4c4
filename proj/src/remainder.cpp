#include "lrl/remainder.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/parallel.hpp"
#include "quadrature.hpp"

namespace lrl {
namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr int kMaxDegree = 40;

using Poly = std::array<double, kMaxDegree + 1>;

double binomial(int n, int j) {
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
    return c;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Integral over [0, U] of sum_j c_j u^j.
double poly_integral(const Poly& c, int degree, double U) {
    double acc = 0.0;
    for (int j = degree; j >= 0; --j) acc = acc * U + c[j] / (j + 1);
    return acc * U;
}

// Piece [a, b] with constant count N: integrand expressed in u = t - a.
struct Piece {
    Poly r{};        // R(a + u)
    int k = 2;
    double Ra = 0.0;
    double Rb = 0.0;

    Piece(double N, double a, double b, double V, int k_) : k(k_) {
        Ra = N - V * ipow(a, k);
        Rb = N - V * ipow(b, k);
        r[0] = Ra;
        for (int j = 1; j <= k; ++j) r[j] = -V * binomial(k, j) * ipow(a, k - j);
    }
};

// int_a^b |R(t)| w(t) dt where w(t) = h t^(h-1) (h = 1 gives w = 1).
double abs_piece(double N, double a, double b, double V, int k, int h) {
    const double len = b - a;
    if (len <= 0.0) return 0.0;
    Piece p(N, a, b, V, k);
    Poly f{};
    int degree = k;
    if (h == 1) {
        f = p.r;
    } else {
        Poly w{};
        for (int j = 0; j <= h - 1; ++j) w[j] = h * binomial(h - 1, j) * ipow(a, h - 1 - j);
        degree = k + h - 1;
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= h - 1; ++j) f[i + j] += p.r[i] * w[j];
    }
    if (p.Ra <= 0.0) return -poly_integral(f, degree, len);
    if (p.Rb >= 0.0) return poly_integral(f, degree, len);
    const double root = std::pow(N / V, 1.0 / k);
    const double u = std::clamp(root - a, 0.0, len);
    return 2.0 * poly_integral(f, degree, u) - poly_integral(f, degree, len);
}

double square_piece(double N, double a, double b, double V, int k) {
    const double len = b - a;
    if (len <= 0.0) return 0.0;
    Piece p(N, a, b, V, k);
    Poly sq{};
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) sq[i + j] += p.r[i] * p.r[j];
    return poly_integral(sq, 2 * k, len);
}

void check_range(const RemainderProfile& profile, double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || hi < lo)
        throw DomainError("integration range must satisfy 0 <= lo <= hi");
    if (hi > profile.t_max())
        throw CoverageError("spectrum covers t <= " + format_double(profile.t_max()) + ", requested " +
                            format_double(hi));
}

// Sums kernel(N, a, b) over the pieces of [lo, hi] on which N is constant.
// Pieces are grouped in fixed-size chunks, each compensated, and the chunk
// partials are reduced in index order.
template <class Kernel>
double sum_pieces(const RemainderProfile& profile, double lo, double hi, Kernel&& kernel) {
    check_range(profile, lo, hi);
    const auto& radii = profile.spectrum().radii;
    const std::size_t first = static_cast<std::size_t>(std::upper_bound(radii.begin(), radii.end(), lo) - radii.begin());
    const std::size_t last = static_cast<std::size_t>(std::upper_bound(radii.begin(), radii.end(), hi) - radii.begin());
    const std::size_t n_pieces = last - first + 1;
    const std::size_t n_chunks = (n_pieces + kChunk - 1) / kChunk;
    std::vector<double> partial(n_chunks, 0.0);
    parallel_for(n_chunks, [&](std::size_t c) {
        detail::CompensatedSum acc;
        const std::size_t begin = c * kChunk, end = std::min(n_pieces, begin + kChunk);
        for (std::size_t j = begin; j < end; ++j) {
            const double a = j == 0 ? lo : radii[first + j - 1];
            const double b = j + 1 == n_pieces ? hi : radii[first + j];
            acc.add(kernel(static_cast<double>(first + j), a, b));
        }
        partial[c] = acc.value();
    });
    detail::CompensatedSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

}  // namespace

RemainderProfile::RemainderProfile(std::shared_ptr<const EntrySpectrum> spectrum, double volume)
    : spectrum_(std::move(spectrum)), volume_(volume) {
    if (!spectrum_) throw DomainError("profile needs a spectrum");
    if (!(volume_ > 0.0) || !std::isfinite(volume_)) throw DomainError("volume must be positive");
}

RemainderProfile make_profile(const StarBody& body, const RigidMotion& motion, double t_max, std::uint64_t budget) {
    return RemainderProfile(std::make_shared<const EntrySpectrum>(entry_spectrum(body, motion, t_max, budget)),
                            body.volume());
}

double remainder_at(const RemainderProfile& profile, double t) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("remainder_at: t must be finite and non-negative");
    return static_cast<double>(count_at(profile.spectrum(), t)) - profile.volume() * ipow(t, profile.dimension());
}

double abs_integral_over(const RemainderProfile& profile, double lo, double hi) {
    const double V = profile.volume();
    const int k = profile.dimension();
    return sum_pieces(profile, lo, hi, [&](double N, double a, double b) { return abs_piece(N, a, b, V, k, 1); });
}

double square_integral_over(const RemainderProfile& profile, double lo, double hi) {
    const double V = profile.volume();
    const int k = profile.dimension();
    return sum_pieces(profile, lo, hi, [&](double N, double a, double b) { return square_piece(N, a, b, V, k); });
}

double abs_integral(const RemainderProfile& profile, double T) {
    if (!(T >= 1.0)) throw DomainError("abs_integral needs T >= 1");
    return abs_integral_over(profile, 1.0, T);
}

double square_integral(const RemainderProfile& profile, double T) {
    if (!(T >= 1.0)) throw DomainError("square_integral needs T >= 1");
    return square_integral_over(profile, 1.0, T);
}

double hardy_average(const RemainderProfile& profile, double T) { return abs_integral(profile, T) / T; }

double rescaled_hardy_average(const RemainderProfile& profile, double T, int h) {
    if (h < 2 || h % 2 != 0) throw DomainError("rescaled average needs an even h >= 2, got " + std::to_string(h));
    if (h + profile.dimension() > kMaxDegree) throw DomainError("h too large");
    if (!(T >= 1.0) || !std::isfinite(T)) throw DomainError("rescaled average needs finite T >= 1");
    const double t_hi = std::pow(T, 1.0 / h);
    const double V = profile.volume();
    const int k = profile.dimension();
    const double integral =
        sum_pieces(profile, 1.0, t_hi, [&](double N, double a, double b) { return abs_piece(N, a, b, V, k, h); });
    return integral / T;
}

double max_abs_remainder(const RemainderProfile& profile, double T) {
    if (!(T >= 1.0)) throw DomainError("max_abs_remainder needs T >= 1");
    check_range(profile, 1.0, T);
    const auto& radii = profile.spectrum().radii;
    const double V = profile.volume();
    const int k = profile.dimension();
    const std::size_t first = static_cast<std::size_t>(std::upper_bound(radii.begin(), radii.end(), 1.0) - radii.begin());
    const std::size_t last = static_cast<std::size_t>(std::upper_bound(radii.begin(), radii.end(), T) - radii.begin());
    double best = 0.0;
    double a = 1.0;
    for (std::size_t j = first; j <= last; ++j) {
        const double b = j == last ? T : radii[j];
        const double N = static_cast<double>(j);
        best = std::max({best, std::abs(N - V * ipow(a, k)), std::abs(N - V * ipow(b, k))});
        a = b;
    }
    return best;
}

}  // namespace lrl
