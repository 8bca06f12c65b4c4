#include "lrl/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "lrl/bessel.hpp"
#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/parallel.hpp"
#include "quadrature.hpp"

namespace lrl {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kMaxPhasePerPanel = kPi;
constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-14;
constexpr std::size_t kMaxPanels = std::size_t{1} << 22;

double norm(const Vec3& v, int k) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += v[i] * v[i];
    return std::sqrt(s);
}

cplx ball_hat(int k, double r) {
    if (r == 0.0) return unit_ball_volume(k);
    const double z = 2.0 * kPi * r;
    if (k == 2) return bessel_j1(z) / r;
    // (sin z - z cos z) / z^3, series near zero.
    double s;
    if (z < 0.5) {
        const double z2 = z * z;
        double term = 1.0 / 3.0;  // n = 1
        s = term;
        for (int n = 2; n < 30; ++n) {
            // ratio of consecutive terms of (-1)^{n+1} 2n z^{2n-2} / (2n+1)!
            term *= -z2 * n / ((n - 1.0) * (2.0 * n) * (2.0 * n + 1.0));
            s += term;
        }
    } else {
        s = (std::sin(z) - z * std::cos(z)) / (z * z * z);
    }
    return 4.0 * kPi * s;
}

// f(z) = (e^{-iz}(1 + iz) - 1) / z^2, so that int_0^rho e^{-iar} r dr = rho^2 f(a rho).
cplx radial_kernel(double z) {
    if (std::abs(z) < 0.5) {
        // sum_{n>=2} (-i)^n (1 - n) / n! z^{n-2}
        cplx sum = 0.0;
        cplx power = -1.0;  // (-i)^2
        double zpow = 1.0;
        double fact = 2.0;
        for (int n = 2; n < 24; ++n) {
            sum += power * ((1.0 - n) / fact) * zpow;
            power *= cplx(0.0, -1.0);
            zpow *= z;
            fact *= (n + 1);
        }
        return sum;
    }
    const double c = std::cos(z), s = std::sin(z);
    return cplx(c + z * s - 1.0, z * c - s) / (z * z);
}

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    cplx value;
    double error = 0.0;
    double phase_span = 0.0;
};

template <class Shape>
class PolarIntegrand {
public:
    PolarIntegrand(const Shape& shape, const Vec3& xi) : shape_(shape), xi_(xi) {}

    // Returns the integrand and writes the phase a * rho.
    cplx operator()(double phi, double& phase) const {
        const Vec3 u{std::cos(phi), std::sin(phi), 0.0};
        const double rho = 1.0 / shape_(u);
        const double a = 2.0 * kPi * (xi_[0] * u[0] + xi_[1] * u[1]);
        phase = a * rho;
        return rho * rho * radial_kernel(phase);
    }

private:
    const Shape& shape_;
    Vec3 xi_;
};

template <class F>
Panel evaluate_panel(const F& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cplx kron = 0.0, gauss = 0.0;
    double pmin = INFINITY, pmax = -INFINITY;
    auto sample = [&](double x) {
        double phase = 0.0;
        const cplx v = f(x, phase);
        pmin = std::min(pmin, phase);
        pmax = std::max(pmax, phase);
        return v;
    };
    const cplx centre = sample(mid);
    kron += detail::kronrod15_weights[7] * centre;
    gauss += detail::gauss7_weights[3] * centre;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * detail::kronrod15_nodes[j];
        const cplx s = sample(mid - dx) + sample(mid + dx);
        kron += detail::kronrod15_weights[j] * s;
        if (j % 2 == 1) gauss += detail::gauss7_weights[j / 2] * s;
    }
    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.value = kron * half;
    p.error = std::abs((kron - gauss) * half);
    p.phase_span = pmax - pmin;
    return p;
}

template <class Shape>
cplx polar_quadrature(const Shape& shape, const Vec3& xi) {
    const PolarIntegrand<Shape> f(shape, xi);
    std::vector<Panel> accepted;
    std::vector<std::pair<double, double>> pending;
    constexpr int kInitial = 16;
    for (int i = kInitial - 1; i >= 0; --i)
        pending.emplace_back(2.0 * kPi * i / kInitial, 2.0 * kPi * (i + 1) / kInitial);
    while (!pending.empty()) {
        const auto [lo, hi] = pending.back();
        pending.pop_back();
        Panel p = evaluate_panel(f, lo, hi);
        if (p.phase_span > kMaxPhasePerPanel && (hi - lo) > 1e-12) {
            const int parts = std::min(1 << 16, static_cast<int>(std::ceil(p.phase_span / kMaxPhasePerPanel)) + 1);
            for (int j = parts - 1; j >= 0; --j)
                pending.emplace_back(lo + (hi - lo) * j / parts, lo + (hi - lo) * (j + 1) / parts);
            continue;
        }
        accepted.push_back(p);
        if (accepted.size() > kMaxPanels) throw QuadratureError("chi_hat: panel limit reached while resolving phase", INFINITY);
    }

    auto totals = [&](double& err) {
        detail::CompensatedSum re, im;
        err = 0.0;
        for (const auto& p : accepted) {
            re.add(p.value.real());
            im.add(p.value.imag());
            err += p.error;
        }
        return cplx(re.value(), im.value());
    };
    double err = 0.0;
    cplx total = totals(err);
    if (err <= std::max(kRelTol * std::abs(total), kAbsTol)) return total;

    // Refine the worst panels until the estimate meets tolerance.
    auto cmp = [&](std::size_t a, std::size_t b) { return accepted[a].error < accepted[b].error; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> worst(cmp);
    for (std::size_t i = 0; i < accepted.size(); ++i) worst.push(i);
    while (err > std::max(kRelTol * std::abs(total), kAbsTol)) {
        if (accepted.size() > kMaxPanels) throw QuadratureError("chi_hat: tolerance not met", err);
        const std::size_t i = worst.top();
        worst.pop();
        const Panel old = accepted[i];
        const double mid = 0.5 * (old.lo + old.hi);
        accepted[i] = evaluate_panel(f, old.lo, mid);
        accepted.push_back(evaluate_panel(f, mid, old.hi));
        worst.push(i);
        worst.push(accepted.size() - 1);
        total += accepted[i].value + accepted.back().value - old.value;
        err += accepted[i].error + accepted.back().error - old.error;
    }
    return totals(err);
}

void check_xi(const Vec3& xi, int k) {
    for (int i = 0; i < k; ++i)
        if (!std::isfinite(xi[i])) throw DomainError("chi_hat: frequency must be finite");
}

}  // namespace

std::complex<double> chi_hat_quadrature(const StarBody& body, const Vec3& xi) {
    if (body.dimension() != 2) throw DomainError("chi_hat quadrature is only available for k=2");
    check_xi(xi, 2);
    if (xi[0] == 0.0 && xi[1] == 0.0) return body.volume();
    return body.visit([&](const auto& shape) { return polar_quadrature(shape, xi); });
}

std::complex<double> chi_hat(const StarBody& body, const Vec3& xi) {
    const int k = body.dimension();
    check_xi(xi, k);
    switch (body.kind()) {
        case BodyKind::Ball:
            return ball_hat(k, norm(xi, k));
        case BodyKind::Ellipsoid: {
            // linear image of the ball: chi_E(xi) = det(A) chi_B(A xi)
            const auto& e = std::get<Ellipsoid>(body.shape());
            Vec3 scaled{0.0, 0.0, 0.0};
            double det = 1.0;
            for (int i = 0; i < k; ++i) {
                scaled[i] = e.axes[i] * xi[i];
                det *= e.axes[i];
            }
            return det * ball_hat(k, norm(scaled, k));
        }
        default:
            if (k != 2) throw DomainError("chi_hat for non-ellipsoidal bodies is only available for k=2");
            return chi_hat_quadrature(body, xi);
    }
}

std::vector<Vec3> direction_grid(int k, int n) {
    if (n < 1) throw DomainError("direction grid needs at least one direction");
    std::vector<Vec3> dirs(n);
    if (k == 2) {
        for (int j = 0; j < n; ++j) {
            const double phi = 2.0 * kPi * j / n;
            dirs[j] = {std::cos(phi), std::sin(phi), 0.0};
        }
        // exact axes when the grid contains them
        if (n % 4 == 0)
            for (int q = 0; q < 4; ++q) dirs[q * n / 4] = {q == 0 ? 1.0 : q == 2 ? -1.0 : 0.0,
                                                            q == 1 ? 1.0 : q == 3 ? -1.0 : 0.0, 0.0};
        return dirs;
    }
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        dirs[i] = {s * std::cos(phi), s * std::sin(phi), z};
    }
    return dirs;
}

std::vector<double> geometric_radii(double lo, double hi, int n) {
    if (n < 1) throw DomainError("radius grid needs at least one point");
    if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("radius grid needs 0 < lo <= hi");
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    if (n > 1) r.back() = hi;
    return r;
}

EnvelopeEstimate decay_envelope_on(const StarBody& body, const std::vector<Vec3>& directions,
                                   const std::vector<double>& radii) {
    if (directions.empty() || radii.empty()) throw DomainError("decay envelope needs directions and radii");
    const int k = body.dimension();
    const double pow_exp = 0.5 * (k + 1);
    EnvelopeEstimate est;
    est.k = k;
    est.directions = directions;
    est.radii = radii;
    est.r_min = *std::min_element(radii.begin(), radii.end());
    est.r_max = *std::max_element(radii.begin(), radii.end());
    const std::size_t nd = directions.size(), nr = radii.size();
    est.samples.resize(nd * nr);
    est.psi.assign(nd, 0.0);
    est.phi.resize(nd);
    est.decay_exponent.assign(nd, std::numeric_limits<double>::quiet_NaN());

    parallel_for(nd, [&](std::size_t d) {
        const Vec3& u = directions[d];
        const double phi = std::atan2(u[1], u[0]);
        const double polar = k == 3 ? std::acos(std::clamp(u[2], -1.0, 1.0)) : 0.0;
        est.phi[d] = phi < 0.0 ? phi + 2.0 * kPi : phi;
        double best = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = radii[i];
            const double mag = std::abs(chi_hat(body, {r * u[0], r * u[1], r * u[2]}));
            est.samples[d * nr + i] = DecaySample{u, est.phi[d], polar, r, mag};
            best = std::max(best, mag * std::pow(r, pow_exp));
        }
        est.psi[d] = best;
        if (nr >= 3) {
            // slope of log(upper envelope) against log r
            std::vector<std::pair<double, double>> pts;
            double upper = 0.0;
            for (std::size_t i = nr; i-- > 0;) {
                upper = std::max(upper, est.samples[d * nr + i].magnitude);
                if (upper > 0.0) pts.emplace_back(std::log(radii[i]), std::log(upper));
            }
            if (pts.size() >= 3) {
                double mx = 0, my = 0;
                for (auto [x, y] : pts) mx += x, my += y;
                mx /= pts.size();
                my /= pts.size();
                double sxx = 0, sxy = 0;
                for (auto [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
                if (sxx > 0) est.decay_exponent[d] = sxy / sxx;
            }
        }
    });
    return est;
}

EnvelopeEstimate decay_envelope(const StarBody& body, int n_directions, double r_min, double r_max, int n_radii) {
    if (!(r_min >= 1.0)) throw DomainError("decay envelope needs r_min >= 1");
    if (!(r_max >= r_min)) throw DomainError("decay envelope needs r_max >= r_min");
    return decay_envelope_on(body, direction_grid(body.dimension(), n_directions),
                             geometric_radii(r_min, r_max, n_radii));
}

std::vector<std::pair<double, double>> lp_report(const EnvelopeEstimate& estimate, const std::vector<double>& p_list) {
    if (estimate.psi.empty()) throw DomainError("lp_report needs a non-empty direction grid");
    const double top = *std::max_element(estimate.psi.begin(), estimate.psi.end());
    std::vector<std::pair<double, double>> out;
    for (double p : p_list) {
        if (!(p > 0.0)) throw DomainError("lp_report: p must be positive");
        if (top == 0.0) {
            out.emplace_back(p, 0.0);
            continue;
        }
        detail::CompensatedSum acc;
        for (double v : estimate.psi) acc.add(v > 0.0 ? std::exp(p * std::log(v / top)) : 0.0);
        const double mean = acc.value() / estimate.psi.size();
        out.emplace_back(p, top * std::exp(std::log(mean) / p));
    }
    return out;
}

std::string decay_csv(const EnvelopeEstimate& estimate) {
    std::ostringstream os;
    const double pow_exp = 0.5 * (estimate.k + 1);
    os << (estimate.k == 3 ? "phi,polar,r,magnitude,magnitude_times_r_pow\n" : "phi,r,magnitude,magnitude_times_r_pow\n");
    for (const auto& s : estimate.samples) {
        os << format_double(s.phi) << ',';
        if (estimate.k == 3) os << format_double(s.polar) << ',';
        os << format_double(s.r) << ',' << format_double(s.magnitude) << ','
           << format_double(s.magnitude * std::pow(s.r, pow_exp)) << '\n';
    }
    return os.str();
}

}  // namespace lrl
