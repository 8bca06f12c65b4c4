#pragma once

// Glue between library objects and the independent oracles.

#include <string>

#include "lrl/body_spec.hpp"
#include "lrl/geometry.hpp"
#include "lrl/rng.hpp"
#include "oracles.hpp"

namespace support {

/// Same body as the library's, rebuilt from its parameters.
inline oracle::Body mirror(const lrl::StarBody& body) {
    oracle::Body b;
    b.k = body.dimension();
    switch (body.kind()) {
        case lrl::BodyKind::Ball:
            b.kind = oracle::Body::Ball;
            break;
        case lrl::BodyKind::Ellipsoid: {
            const auto& e = std::get<lrl::Ellipsoid>(body.shape());
            b.kind = oracle::Body::Ellipsoid;
            b.axes.assign(e.axes.begin(), e.axes.begin() + b.k);
            break;
        }
        case lrl::BodyKind::PNormBall:
            b.kind = oracle::Body::PBall;
            b.p = std::get<lrl::PNormBall>(body.shape()).p;
            break;
        case lrl::BodyKind::PolynomialSublevel: {
            const auto& s = std::get<lrl::PolynomialSublevel>(body.shape());
            b.kind = oracle::Body::Poly;
            b.p = s.degree;
            b.coeffs = s.coefficients;
            break;
        }
    }
    return b;
}

inline oracle::Mat mirror(const lrl::Rotation& r) {
    return r.dimension() == 2 ? oracle::rotation2(r.angle()) : oracle::rotation3(r.quaternion());
}

inline std::array<double, 3> translation(const lrl::RigidMotion& m) {
    return {m.translation[0], m.translation[1], m.translation[2]};
}

/// Box half-width that certainly covers T*theta(D) + x.
inline double reach(const lrl::StarBody& body, double T) { return T * body.circumradius() * 1.01 + 2.0; }

inline std::uint64_t brute_count(const lrl::StarBody& body, const lrl::RigidMotion& m, double T) {
    return oracle::brute_count(mirror(body), mirror(m.rotation), translation(m), T, reach(body, T));
}

inline std::vector<double> brute_radii(const lrl::StarBody& body, const lrl::RigidMotion& m, double T) {
    return oracle::brute_radii(mirror(body), mirror(m.rotation), translation(m), T, reach(body, T));
}

/// Body catalogue covering every kind in both dimensions.
inline const std::vector<std::pair<std::string, int>>& catalogue() {
    static const std::vector<std::pair<std::string, int>> c{
        {"ball", 2},           {"ball", 3},           {"ellipsoid:1,1.6", 2}, {"ellipsoid:0.7,1,1.3", 3},
        {"pball:4", 2},        {"pball:6", 2},        {"pball:4", 3},         {"poly:4:1,0,1,0,2", 2},
        {"poly:2:1,0.5,1", 2}, {"poly:6:1,0,0,0,0,0,1", 2}};
    return c;
}

}  // namespace support
