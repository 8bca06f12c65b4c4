#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrl/bessel.hpp"
#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/fourier.hpp"
#include "support.hpp"

using namespace lrl;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Polar route written independently: Gauss-Legendre in r (64 nodes), the
// trapezoid rule in phi; only the real part, which is all there is for
// centrally symmetric bodies.
double polar_reference(const oracle::Body& b, double xi0, double xi1, int n_phi = 2048) {
    static const auto nodes = [] {
        // Newton on P_64
        std::vector<std::pair<double, double>> nw;
        const int n = 64;
        for (int i = 1; i <= n; ++i) {
            double x = std::cos(kPi * (i - 0.25) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            nw.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        return nw;
    }();
    double total = 0.0;
    for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * kPi * j / n_phi;
        const double c = std::cos(phi), s = std::sin(phi);
        const double rho = 1.0 / oracle::entry_radius(b, {c, s, 0.0});
        const double a = 2.0 * kPi * (xi0 * c + xi1 * s);
        double inner = 0.0;
        for (auto [x, w] : nodes) {
            const double r = 0.5 * rho * (x + 1.0);
            inner += w * std::cos(a * r) * r;
        }
        total += 0.5 * rho * inner;
    }
    return total * 2.0 * kPi / n_phi;
}

}  // namespace

TEST_CASE("J1 against two independent references") {
    CHECK(bessel_j1(2.0 * kPi) == Approx(-0.212382530076369052).epsilon(1e-14));
    CHECK(bessel_j1(0.0) == 0.0);
    for (int i = 0; i < 60; ++i) {
        const double z = 0.05 + 0.4 * i;  // spans both branches
        const double ref = z < 18.0 ? oracle::j1_series(z) : oracle::j1_integral(z);
        CAPTURE(z);
        CHECK(std::abs(bessel_j1(z) - ref) <= 1e-12 + 1e-10 * std::abs(ref));
        CHECK(bessel_j1(-z) == -bessel_j1(z));
    }
    for (double z : {30.0, 55.5, 100.0, 250.25, 1000.0}) {
        CAPTURE(z);
        CHECK(std::abs(bessel_j1(z) - oracle::j1_integral(z, 1 << 15)) <= 1e-12);
    }
}

TEST_CASE("closed forms for the ball") {
    const auto disk = StarBody::ball(2);
    CHECK(chi_hat(disk, {1.0, 0.0, 0.0}).real() == Approx(bessel_j1(2.0 * kPi)).epsilon(1e-14));
    CHECK(std::norm(chi_hat(disk, {0.0, 1.0, 0.0})) == Approx(0.180425356326559220 / 4.0).epsilon(1e-13));
    CHECK(chi_hat(disk, {0.0, 0.0, 0.0}).real() == Approx(kPi));
    const auto ball3 = StarBody::ball(3);
    for (double r : {1e-6, 0.01, 0.3, 1.0, 7.5, 40.0}) {
        const double z = 2.0 * kPi * r;
        // small z: the Taylor series avoids the cancellation in sin z - z cos z
        const double ref = z < 0.1 ? 4.0 * kPi * (1.0 / 3.0 - z * z / 30.0 + z * z * z * z / 840.0)
                                   : 4.0 * kPi * (std::sin(z) - z * std::cos(z)) / (z * z * z);
        CAPTURE(r);
        CHECK(chi_hat(ball3, {0.0, r, 0.0}).real() == Approx(ref).epsilon(1e-9).scale(1e-12));
    }
    CHECK(chi_hat(ball3, {0.0, 0.0, 0.0}).real() == Approx(4.0 * kPi / 3.0));
}

TEST_CASE("quadrature route reproduces closed forms") {
    for (const char* text : {"ball", "ellipsoid:1,1.6", "ellipsoid:0.4,2"}) {
        const auto body = parse_body_spec(text, 2);
        for (double r : {0.01, 0.7, 3.0, 20.0, 150.0})
            for (double phi : {0.0, 0.3, 1.1, 2.9}) {
                const Vec3 xi{r * std::cos(phi), r * std::sin(phi), 0.0};
                const auto q = chi_hat_quadrature(body, xi), c = chi_hat(body, xi);
                CAPTURE(text);
                CAPTURE(r);
                CHECK(std::abs(q - c) <= 1e-8 * std::abs(c) + 1e-12);
            }
    }
}

TEST_CASE("quadrature agrees with an independent polar reference on flat bodies") {
    for (const char* text : {"pball:4", "pball:8", "poly:4:1,0,1,0,2"}) {
        const auto body = parse_body_spec(text, 2);
        const auto ob = support::mirror(body);
        for (double r : {0.5, 2.0, 6.0})
            for (double phi : {0.0, 0.4, kPi / 4}) {
                const double x0 = r * std::cos(phi), x1 = r * std::sin(phi);
                const auto q = chi_hat(body, {x0, x1, 0.0});
                CAPTURE(text);
                CAPTURE(r);
                CHECK(std::abs(q.imag()) <= 1e-10);
                CHECK(q.real() == Approx(polar_reference(ob, x0, x1)).epsilon(1e-8).scale(1e-10));
            }
        CHECK(chi_hat(body, {0.0, 0.0, 0.0}).real() == body.volume());
    }
}

TEST_CASE("decay envelope of the disk is flat and bounded") {
    const auto env = decay_envelope(StarBody::ball(2), 64, 10.0, 100.0, 400);
    const auto [lo, hi] = std::minmax_element(env.psi.begin(), env.psi.end());
    CHECK((*hi - *lo) / *hi <= 0.05);
    CHECK(*hi <= 0.36);
    CHECK(*hi >= 0.30);  // 1/pi is the asymptotic amplitude
    const auto lp = lp_report(env, {2.0, 4.0, 8.0});
    for (const auto& [p, v] : lp) CHECK(v == Approx(*hi).epsilon(0.05));
}

TEST_CASE("flat points put the p = 4 envelope maxima on the axes") {
    const auto env = decay_envelope(StarBody::pnorm_ball(4, 2), 32, 10.0, 100.0, 48);
    const std::size_t best = std::max_element(env.psi.begin(), env.psi.end()) - env.psi.begin();
    const Vec3 u = env.directions[best];
    CHECK(std::max(std::abs(u[0]), std::abs(u[1])) == Approx(1.0));
    // axis versus diagonal
    CHECK(env.psi[0] > 2.0 * env.psi[4]);
    // power means are non-decreasing in p and bounded by the max
    const auto lp = lp_report(env, {2.0, 4.0, 8.0, 16.0});
    for (std::size_t i = 1; i < lp.size(); ++i) CHECK(lp[i].second >= lp[i - 1].second * (1.0 - 1e-12));
    CHECK(lp.back().second <= env.psi[best]);
}

TEST_CASE("direction grids, radii and CSV") {
    const auto d2 = direction_grid(2, 8);
    CHECK(d2[0] == Vec3{1.0, 0.0, 0.0});
    CHECK(d2[2] == Vec3{0.0, 1.0, 0.0});
    for (const auto& u : direction_grid(3, 50)) CHECK(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] == Approx(1.0));
    const auto r = geometric_radii(10.0, 1000.0, 3);
    CHECK(r[1] == Approx(100.0));
    CHECK(r[2] == 1000.0);
    const auto env = decay_envelope(StarBody::ball(2), 4, 1.0, 2.0, 2);
    const auto csv = decay_csv(env);
    CHECK(csv.rfind("phi,r,magnitude,magnitude_times_r_pow\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    const auto env3 = decay_envelope(StarBody::ball(3), 3, 1.0, 2.0, 2);
    CHECK(decay_csv(env3).rfind("phi,polar,r,", 0) == 0);
}

TEST_CASE("fourier errors") {
    CHECK_THROWS_AS(chi_hat(StarBody::pnorm_ball(4, 3), {1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(chi_hat(StarBody::ball(2), {NAN, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(decay_envelope(StarBody::ball(2), 4, 0.5, 2.0, 3), DomainError);
    CHECK_THROWS_AS(direction_grid(2, 0), DomainError);
}
