#include "lrl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/fourier.hpp"
#include "lrl/parallel.hpp"
#include "quadrature.hpp"

namespace lrl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kExactTailRadius = 64;

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Fixed-order pairwise sum.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double integral_tail_bound(int k, double radius) {
    const double delta = 0.5 * std::sqrt(static_cast<double>(k));
    const double s0 = radius - 2.0 * delta;
    if (k == 2) return 2.0 * kPi * (1.0 / s0 + delta / (2.0 * s0 * s0));
    return 4.0 * kPi * (1.0 / s0 + delta / (s0 * s0) + delta * delta / (3.0 * s0 * s0 * s0));
}

double shell_sum(int k, int lo_exclusive, int hi_inclusive) {
    detail::CompensatedSum acc;
    const std::int64_t lo2 = static_cast<std::int64_t>(lo_exclusive) * lo_exclusive;
    const std::int64_t hi2 = static_cast<std::int64_t>(hi_inclusive) * hi_inclusive;
    const int b = hi_inclusive;
    for (int a = -b; a <= b; ++a)
        for (int c = -b; c <= b; ++c) {
            if (k == 2) {
                const std::int64_t n2 = std::int64_t{a} * a + std::int64_t{c} * c;
                if (n2 > lo2 && n2 <= hi2) acc.add(std::pow(static_cast<double>(n2), -1.5));
                continue;
            }
            for (int e = -b; e <= b; ++e) {
                const std::int64_t n2 = std::int64_t{a} * a + std::int64_t{c} * c + std::int64_t{e} * e;
                if (n2 > lo2 && n2 <= hi2) acc.add(1.0 / (static_cast<double>(n2) * static_cast<double>(n2)));
            }
        }
    return acc.value();
}

}  // namespace

std::vector<IVec3> frequency_shell(int k, int n_max) {
    if (n_max < 1) throw DomainError("frequency cutoff n_max must be >= 1");
    if (k != 2 && k != 3) throw DomainError("dimension must be 2 or 3");
    std::vector<IVec3> out;
    const std::int64_t lim = n_max, lim2 = lim * lim;
    const std::int64_t zlo = k == 3 ? -lim : 0, zhi = k == 3 ? lim : 0;
    for (std::int64_t a = -lim; a <= lim; ++a)
        for (std::int64_t b = -lim; b <= lim; ++b)
            for (std::int64_t c = zlo; c <= zhi; ++c) {
                const std::int64_t n2 = a * a + b * b + c * c;
                if (n2 > 0 && n2 <= lim2) out.push_back({a, b, c});
            }
    return out;
}

std::complex<double> truncated_spectral_remainder(const StarBody& body, const RigidMotion& motion, double T,
                                                  int n_max) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("T must be positive");
    const int k = body.dimension();
    const auto shell = frequency_shell(k, n_max);
    std::vector<std::complex<double>> terms(shell.size());
    parallel_for(shell.size(), [&](std::size_t i) {
        const IVec3& n = shell[i];
        Vec3 v = motion.rotation.apply_inverse(
            {static_cast<double>(n[0]), static_cast<double>(n[1]), static_cast<double>(n[2])});
        for (auto& c : v) c *= T;
        double nx = 0.0;
        for (int j = 0; j < k; ++j) nx += static_cast<double>(n[j]) * motion.translation[j];
        // keep the phase argument small: <n, x> mod 1
        nx -= std::floor(nx);
        terms[i] = chi_hat(body, v) * std::polar(1.0, -2.0 * kPi * nx);
    });
    detail::CompensatedSum re, im;
    for (const auto& t : terms) {
        re.add(t.real());
        im.add(t.imag());
    }
    return ipow(T, k) * std::complex<double>(re.value(), im.value());
}

MeanSquareEstimate torus_mean_square_exact(const StarBody& body, const Rotation& rotation, double T,
                                           std::uint64_t n_samples, const CounterRng& rng, std::uint64_t budget) {
    if (n_samples < 2) throw DomainError("torus mean square needs at least 2 samples");
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("T must be positive");
    const int k = body.dimension();
    const double main_term = body.volume() * ipow(T, k);
    std::vector<double> sq(n_samples);
    parallel_for(n_samples, [&](std::size_t i) {
        CounterRng local = rng.substream(i);
        Vec3 x{0.0, 0.0, 0.0};
        for (int j = 0; j < k; ++j) x[j] = local.uniform();
        const RigidMotion motion = RigidMotion::make(rotation, x);
        const double r = static_cast<double>(lattice_count(body, motion, T, budget)) - main_term;
        sq[i] = r * r;
    });
    const double n = static_cast<double>(n_samples);
    const double mean = pairwise_sum(sq.data(), sq.size()) / n;
    std::vector<double> dev(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) dev[i] = (sq[i] - mean) * (sq[i] - mean);
    const double var = pairwise_sum(dev.data(), dev.size()) / (n - 1.0);
    return {mean, std::sqrt(var / n), n_samples};
}

double lattice_tail_sum(int k, int n_max) {
    if (k != 2 && k != 3) throw DomainError("dimension must be 2 or 3");
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    if (n_max >= kExactTailRadius) return integral_tail_bound(k, n_max);
    return shell_sum(k, n_max, kExactTailRadius) + integral_tail_bound(k, kExactTailRadius);
}

SpectralMeanSquare spectral_mean_square(const StarBody& body, const Rotation& rotation, double T, int n_max) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("T must be positive");
    const int k = body.dimension();
    const auto shell = frequency_shell(k, n_max);
    std::vector<double> terms(shell.size());
    parallel_for(shell.size(), [&](std::size_t i) {
        const IVec3& n = shell[i];
        Vec3 v = rotation.apply_inverse({static_cast<double>(n[0]), static_cast<double>(n[1]), static_cast<double>(n[2])});
        for (auto& c : v) c *= T;
        terms[i] = std::norm(chi_hat(body, v));
    });
    detail::CompensatedSum acc;
    for (double t : terms) acc.add(t);

    // Envelope beyond the cutoff: one oscillation window of 8 radii at each of
    // two octaves starting from T n_max. Per octave, psi^2 is averaged over
    // directions; the larger octave mean is kept.
    const double r0 = T * n_max;
    const int n_dirs = body.kind() == BodyKind::Ball ? 1 : (k == 2 ? 32 : 64);
    auto dirs = direction_grid(k, n_dirs);
    if (k == 2 && n_dirs > 1) {
        // midpoint rule in the angle: axes carry a measure-zero spike
        for (int j = 0; j < n_dirs; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / n_dirs;
            dirs[j] = {std::cos(phi), std::sin(phi), 0.0};
        }
    }
    double mean_sq = 0.0, sup_sq = 0.0;
    for (int octave = 0; octave < 2; ++octave) {
        std::vector<double> radii;
        for (int j = 0; j < 8; ++j) radii.push_back(r0 * std::pow(2.0, octave) + j / 8.0);
        const auto env = decay_envelope_on(body, dirs, radii);
        double acc = 0.0;
        for (double p : env.psi) {
            acc += p * p;
            sup_sq = std::max(sup_sq, p * p);
        }
        mean_sq = std::max(mean_sq, acc / static_cast<double>(env.psi.size()));
    }

    SpectralMeanSquare out;
    out.sum = ipow(T, 2 * k) * acc.value();
    out.envelope_constant = mean_sq;
    out.envelope_sup = sup_sq;
    out.tail_bound = ipow(T, k - 1) * out.envelope_constant * lattice_tail_sum(k, n_max);
    return out;
}

ParsevalCheck parseval_check(const StarBody& body, const Rotation& rotation, double T, int n_max,
                             std::uint64_t n_samples, std::uint64_t seed) {
    ParsevalCheck c;
    c.body = format_body_spec(body);
    c.T = T;
    c.n_max = n_max;
    c.seed = seed;
    c.monte_carlo = torus_mean_square_exact(body, rotation, T, n_samples, CounterRng(seed, 0x7061727365ULL));
    c.spectral = spectral_mean_square(body, rotation, T, n_max);
    c.difference = std::abs(c.monte_carlo.estimate - c.spectral.sum);
    c.allowance = 4.0 * c.monte_carlo.std_error + c.spectral.tail_bound;
    c.pass = c.difference <= c.allowance;
    return c;
}

std::string parseval_csv(const std::vector<ParsevalCheck>& checks) {
    std::ostringstream os;
    os << "T,method,value,error_bound,n_max,seed\n";
    for (const auto& c : checks) {
        os << format_double(c.T) << ",monte_carlo," << format_double(c.monte_carlo.estimate) << ','
           << format_double(c.monte_carlo.std_error) << ',' << c.n_max << ',' << c.seed << '\n';
        os << format_double(c.T) << ",spectral_sum," << format_double(c.spectral.sum) << ','
           << format_double(c.spectral.tail_bound) << ',' << c.n_max << ',' << c.seed << '\n';
    }
    return os.str();
}

}  // namespace lrl
