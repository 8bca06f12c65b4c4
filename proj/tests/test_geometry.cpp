#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/geometry.hpp"
#include "lrl/rng.hpp"
#include "support.hpp"

using namespace lrl;
using doctest::Approx;

TEST_CASE("volumes against closed forms and frozen high-precision values") {
    CHECK(StarBody::ball(2).volume() == Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(StarBody::ball(3).volume() == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
    CHECK(StarBody::ellipsoid({1.0, 2.0}).volume() == Approx(2.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(StarBody::ellipsoid({1.0, 2.0, 0.5}).volume() == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
    // 2 Gamma(5/4)^2 / Gamma(3/2) and 8 Gamma(5/4)^3 / Gamma(7/4), 20 digits
    CHECK(StarBody::pnorm_ball(4, 2).volume() == Approx(3.70814935460274383687).epsilon(1e-14));
    CHECK(StarBody::pnorm_ball(4, 3).volume() == Approx(6.48198735178638202215).epsilon(1e-14));
    // {x^4 + x^2 y^2 + 2 y^4 <= 1}
    CHECK(StarBody::polynomial(4, {1, 0, 1, 0, 2}).volume() == Approx(2.90567963239570357904).epsilon(1e-11));
    // x^2 + y^2 as a polynomial is the disk
    CHECK(StarBody::polynomial(2, {1, 0, 1}).volume() == Approx(std::numbers::pi).epsilon(1e-11));
}

TEST_CASE("volumes agree with the oracle's polar-area rule") {
    for (const auto& [spec, k] : support::catalogue()) {
        if (k != 2) continue;
        const auto body = parse_body_spec(spec, k);
        CAPTURE(spec);
        CHECK(body.volume() == Approx(oracle::planar_area(support::mirror(body))).epsilon(1e-10));
    }
}

TEST_CASE("gauge examples and homogeneity") {
    const auto ball = StarBody::ball(2);
    CHECK(ball.gauge({3, 4, 0}) == Approx(5.0));
    const auto e = StarBody::ellipsoid({1.0, 2.0});
    CHECK(e.gauge({0, 2, 0}) == Approx(1.0));
    CHECK(e.gauge({1, 0, 0}) == Approx(1.0));
    const auto p4 = StarBody::pnorm_ball(4, 2);
    CHECK(p4.gauge({1, 1, 0}) == Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK(p4.gauge({0, 0, 0}) == 0.0);

    CounterRng rng(3, 1);
    for (const auto& [spec, k] : support::catalogue()) {
        const auto body = parse_body_spec(spec, k);
        for (int i = 0; i < 20; ++i) {
            Vec3 y{rng.normal(), rng.normal(), k == 3 ? rng.normal() : 0.0};
            const double lam = 0.1 + 10.0 * rng.uniform();
            Vec3 ly{lam * y[0], lam * y[1], lam * y[2]};
            CAPTURE(spec);
            CHECK(body.gauge(ly) == Approx(lam * body.gauge(y)).epsilon(1e-13));
            CHECK(body.gauge(ly) == Approx(oracle::entry_radius(support::mirror(body), {ly[0], ly[1], ly[2]})).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(ball.gauge({NAN, 0, 0}), DomainError);
}

TEST_CASE("poly x^4 + y^4 is the p = 4 ball") {
    const auto poly = parse_body_spec("poly:4:1,0,0,0,1", 2);
    const auto pb = parse_body_spec("pball:4", 2);
    CounterRng rng(11, 2);
    for (int i = 0; i < 100; ++i) {
        const Vec3 y{4.0 * rng.normal(), 4.0 * rng.normal(), 0.0};
        CHECK(std::abs(poly.gauge(y) - pb.gauge(y)) <= 1e-12 * pb.gauge(y));
    }
    CHECK(poly.volume() == Approx(pb.volume()).epsilon(1e-11));
}

TEST_CASE("circumradius and inradius bracket the boundary") {
    CHECK(StarBody::pnorm_ball(4, 2).circumradius() == Approx(std::pow(2.0, 0.25)));
    CHECK(StarBody::pnorm_ball(4, 3).circumradius() == Approx(std::pow(3.0, 0.25)));
    CHECK(StarBody::ellipsoid({0.5, 2.0}).circumradius() == Approx(2.0));
    CHECK(StarBody::ellipsoid({0.5, 2.0}).inradius() == Approx(0.5));
    CounterRng rng(5, 5);
    for (const auto& [spec, k] : support::catalogue()) {
        const auto body = parse_body_spec(spec, k);
        for (int i = 0; i < 2000; ++i) {
            Vec3 u{rng.normal(), rng.normal(), k == 3 ? rng.normal() : 0.0};
            const double n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
            for (auto& c : u) c /= n;
            const double boundary = 1.0 / body.gauge(u);  // distance to the boundary along u
            CAPTURE(spec);
            REQUIRE(boundary <= body.circumradius() * (1.0 + 1e-12));
            REQUIRE(boundary >= body.inradius() * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("invalid bodies are rejected") {
    CHECK_THROWS_AS(StarBody::ellipsoid({1.0, -2.0}), BodyInvalid);
    CHECK_THROWS_AS(StarBody::ellipsoid({1.0, 0.0}), BodyInvalid);
    CHECK_THROWS_AS(StarBody::pnorm_ball(3, 2), BodyInvalid);
    CHECK_THROWS_AS(StarBody::pnorm_ball(4, 4), BodyInvalid);
    CHECK_THROWS_AS(StarBody::polynomial(4, {1, 0, -3, 0, 1}), BodyInvalid);  // vanishes on a line pair
    CHECK_THROWS_AS(StarBody::polynomial(2, {1, 0, -1}), BodyInvalid);
    CHECK_THROWS_AS(StarBody::polynomial(3, {1, 0, 0, 1}), BodyInvalid);
    CHECK_THROWS_AS(StarBody::polynomial(4, {1, 0, 1}), BodyInvalid);
    CHECK_THROWS_AS(StarBody::ball(4), BodyInvalid);
}

TEST_CASE("body spec parsing, errors and round trip") {
    CHECK(parse_body_spec("ball", 2).kind() == BodyKind::Ball);
    const auto e = parse_body_spec("ellipsoid:1,2", 2);
    REQUIRE(e.kind() == BodyKind::Ellipsoid);
    CHECK(std::get<Ellipsoid>(e.shape()).axes[1] == 2.0);

    auto position_of = [](const std::string& text, int k) -> std::size_t {
        try {
            parse_body_spec(text, k);
        } catch (const ParseError& err) {
            return err.position();
        }
        return std::string::npos;
    };
    CHECK(position_of("pball:3.5", 2) == 6);
    CHECK(position_of("ellipsoid:1,x", 2) == 12);
    CHECK(position_of("cube", 2) == 0);
    CHECK(position_of("ellipsoid:1,2", 3) != std::string::npos);
    CHECK(position_of("poly:4:1,0,1,0,2", 3) != std::string::npos);
    CHECK(position_of("ball:1", 2) != std::string::npos);
    CHECK_THROWS_WITH_AS(parse_body_spec("pball:3.5", 2), doctest::Contains("even integer"), ParseError);
    CHECK_THROWS_AS(parse_body_spec("poly:2:1,0,-1", 2), BodyInvalid);

    for (const auto& [spec, k] : support::catalogue()) {
        const auto body = parse_body_spec(spec, k);
        const auto again = parse_body_spec(format_body_spec(body), k);
        CHECK(format_body_spec(again) == format_body_spec(body));
        CHECK(again.volume() == body.volume());
    }
    CHECK(format_body_spec(parse_body_spec("ellipsoid:1.0,0.30000000000000004", 2)) ==
          "ellipsoid:1,0.30000000000000004");
}

TEST_CASE("rotations are orthogonal and Haar samples are reproducible") {
    CounterRng rng(9, 4);
    for (int k : {2, 3}) {
        for (int i = 0; i < 50; ++i) {
            const Rotation r = haar_rotation(k, rng);
            const auto& m = r.matrix();
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    double dot = 0.0;
                    for (int c = 0; c < k; ++c) dot += m[c][a] * m[c][b];
                    CHECK(dot == Approx(a == b ? 1.0 : 0.0).epsilon(1e-14).scale(1.0));
                }
            if (k == 3) {
                const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
                CHECK(det == Approx(1.0).epsilon(1e-13));
            }
            const Vec3 v{0.3, -1.2, k == 3 ? 0.7 : 0.0};
            const Vec3 back = r.apply_inverse(r.apply(v));
            for (int c = 0; c < 3; ++c) CHECK(back[c] == Approx(v[c]).epsilon(1e-14).scale(1.0));
        }
    }
    CounterRng a(42, 7), b(42, 7);
    const auto ma = haar_sample(3, a), mb = haar_sample(3, b);
    CHECK(ma.rotation.quaternion() == mb.rotation.quaternion());
    CHECK(ma.translation == mb.translation);
}

TEST_CASE("Haar angle in the plane is uniform") {
    CounterRng rng(1, 99);
    int bins[8] = {};
    const int n = 80000;
    for (int i = 0; i < n; ++i) {
        const double a = haar_rotation(2, rng).angle();
        bins[static_cast<int>(a / (2.0 * std::numbers::pi) * 8)]++;
    }
    for (int b : bins) CHECK(std::abs(b - n / 8) < 5 * std::sqrt(n / 8.0));
}

TEST_CASE("translations are reduced modulo the lattice") {
    const auto m = RigidMotion::make(Rotation::identity(2), {2.25, -0.75, 0.0});
    CHECK(m.translation[0] == 0.25);
    CHECK(m.translation[1] == 0.25);
    CHECK_THROWS_AS(RigidMotion::make(Rotation::identity(2), {INFINITY, 0, 0}), DomainError);
}

TEST_CASE("counter RNG is a pure function of its coordinates") {
    CounterRng a(5, 1), b(5, 1), c(5, 2);
    for (int i = 0; i < 10; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        CHECK(va != c.next_u64());
    }
    CHECK(CounterRng(5, 1).at(3) == CounterRng(5, 1, 3).next_u64());
    CHECK(CounterRng(5, 1).substream(4).at(0) == CounterRng(5, 1).substream(4).at(0));
    CHECK(CounterRng(5, 1).substream(4).at(0) != CounterRng(5, 1).substream(5).at(0));
    double mean = 0.0, sq = 0.0;
    CounterRng n(8, 8);
    for (int i = 0; i < 100000; ++i) {
        const double z = n.normal();
        mean += z;
        sq += z * z;
    }
    CHECK(std::abs(mean / 1e5) < 0.02);
    CHECK(sq / 1e5 == Approx(1.0).epsilon(0.02));
}

TEST_CASE("curvature hypotheses are reported for every admitted body") {
    for (const auto& [spec, k] : support::catalogue()) {
        const auto h = lemma_hypotheses(parse_body_spec(spec, k));
        CHECK(h.satisfied);
        CHECK(!h.note.empty());
    }
}
