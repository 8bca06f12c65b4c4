#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "lrl/counting.hpp"
#include "lrl/geometry.hpp"
#include "lrl/rng.hpp"

namespace lrl {

/// Nonzero frequencies with Euclidean norm <= n_max, enumerated over the
/// max-norm box in lexicographic order.
std::vector<IVec3> frequency_shell(int k, int n_max);

/// T^k sum_{0 < |n| <= n_max} chi_hat(T theta^{-1} n) e^{-2 pi i <n, x>}:
/// the truncated Fourier series of R(T, theta, .) evaluated at x.
std::complex<double> truncated_spectral_remainder(const StarBody& body, const RigidMotion& motion, double T, int n_max);

struct MeanSquareEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};

/// Monte Carlo estimate of int_{torus} |R(T, theta, x)|^2 dx with uniform x
/// and an exact lattice count per sample. Sample i draws from
/// rng.substream(i), so the estimate is independent of scheduling.
MeanSquareEstimate torus_mean_square_exact(const StarBody& body, const Rotation& rotation, double T,
                                           std::uint64_t n_samples, const CounterRng& rng,
                                           std::uint64_t budget = kDefaultEnumerationBudget);

struct SpectralMeanSquare {
    double sum = 0.0;          // T^{2k} sum_{0<|n|<=n_max} |chi_hat(T theta^{-1} n)|^2
    double tail_bound = 0.0;   // T^{k-1} C sum_{|n|>n_max} |n|^{-(k+1)}
    double envelope_constant = 0.0;  // C: direction mean of psi^2 beyond T n_max
    double envelope_sup = 0.0;       // largest psi^2 seen in the same windows
};

/// Truncated Parseval sum plus a tail estimate built from the decay envelope
/// measured on r >= T n_max. The tail uses the direction mean of psi^2, the
/// quantity a rotated lattice samples at high frequency; for bodies with flat
/// points the sup of psi keeps growing along the flat normals, so a sup-based
/// bound would swamp the sum it is meant to bracket. For the ball the two
/// coincide.
SpectralMeanSquare spectral_mean_square(const StarBody& body, const Rotation& rotation, double T, int n_max);

/// Upper bound for sum_{n in Z^k, |n| > n_max} |n|^{-(k+1)}: exact shells out
/// to radius 64, then the integral of (|y| - sqrt(k)/2)^{-(k+1)} beyond.
double lattice_tail_sum(int k, int n_max);

struct ParsevalCheck {
    std::string body;
    double T = 0.0;
    int n_max = 0;
    std::uint64_t seed = 0;
    MeanSquareEstimate monte_carlo;
    SpectralMeanSquare spectral;
    double difference = 0.0;
    double allowance = 0.0;  // 4 std errors + tail bound
    bool pass = false;
};

ParsevalCheck parseval_check(const StarBody& body, const Rotation& rotation, double T, int n_max,
                             std::uint64_t n_samples, std::uint64_t seed);

/// CSV rows: T,method,value,error_bound,n_max,seed (two rows per check).
std::string parseval_csv(const std::vector<ParsevalCheck>& checks);

}  // namespace lrl
