#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lrl/rng.hpp"

namespace lrl {

/// Points in R^k for k in {2, 3}; unused trailing coordinates are zero.
using Vec3 = std::array<double, 3>;
using IVec3 = std::array<std::int64_t, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// An element of SO(k). k = 2 stores an angle in [0, 2pi), k = 3 a unit
/// quaternion (w, x, y, z); the matrix is materialized at construction.
class Rotation {
public:
    static Rotation identity(int k);
    static Rotation from_angle(double angle);
    static Rotation from_quaternion(std::array<double, 4> q);

    int dimension() const noexcept { return k_; }
    double angle() const noexcept { return angle_; }
    const std::array<double, 4>& quaternion() const noexcept { return quat_; }
    const Mat3& matrix() const noexcept { return m_; }

    Vec3 apply(const Vec3& v) const noexcept;
    /// theta^{-1} v, i.e. the transpose applied to v.
    Vec3 apply_inverse(const Vec3& v) const noexcept;

private:
    Rotation() = default;
    int k_ = 2;
    double angle_ = 0.0;
    std::array<double, 4> quat_{1.0, 0.0, 0.0, 0.0};
    Mat3 m_{};
};

/// (theta, x) with x taken modulo Z^k, every coordinate in [0, 1).
struct RigidMotion {
    Rotation rotation;
    Vec3 translation;

    static RigidMotion make(const Rotation& rotation, const Vec3& x);
    static RigidMotion identity(int k);
    int dimension() const noexcept { return rotation.dimension(); }
};

/// theta^{-1}(m - x) as a real vector.
inline Vec3 inverse_motion_apply(const RigidMotion& motion, const IVec3& m) noexcept {
    const Vec3 d{static_cast<double>(m[0]) - motion.translation[0],
                 static_cast<double>(m[1]) - motion.translation[1],
                 static_cast<double>(m[2]) - motion.translation[2]};
    return motion.rotation.apply_inverse(d);
}

Rotation haar_rotation(int k, CounterRng& rng);
/// Haar-uniform rotation times uniform translation on the torus.
RigidMotion haar_sample(int k, CounterRng& rng);

// ---------------------------------------------------------------------------
// Star bodies. Each shape is a cheap value type whose call operator is the
// unchecked Minkowski gauge; StarBody wraps them with validation and the
// derived constants (volume, circumradius, inradius).

struct Ball {
    int k = 2;
    double operator()(const Vec3& y) const noexcept {
        double s = y[0] * y[0] + y[1] * y[1];
        if (k == 3) s += y[2] * y[2];
        return std::sqrt(s);
    }
};

struct Ellipsoid {
    int k = 2;
    std::array<double, 3> axes{1.0, 1.0, 1.0};
    std::array<double, 3> inv_sq{1.0, 1.0, 1.0};
    double operator()(const Vec3& y) const noexcept {
        double s = y[0] * y[0] * inv_sq[0] + y[1] * y[1] * inv_sq[1];
        if (k == 3) s += y[2] * y[2] * inv_sq[2];
        return std::sqrt(s);
    }
};

struct PNormBall {
    int k = 2;
    int p = 4;
    double operator()(const Vec3& y) const noexcept;
};

/// {y : P(y) <= 1} for a homogeneous polynomial P of even degree h in two
/// variables. coefficients[i] multiplies x^(h-i) y^i.
struct PolynomialSublevel {
    int degree = 2;
    std::vector<double> coefficients;
    double evaluate(double x, double y) const noexcept;
    double operator()(const Vec3& y) const noexcept;
};

enum class BodyKind { Ball, Ellipsoid, PNormBall, PolynomialSublevel };

class StarBody {
public:
    using Shape = std::variant<Ball, Ellipsoid, PNormBall, PolynomialSublevel>;

    static StarBody ball(int k);
    static StarBody ellipsoid(const std::vector<double>& axes);
    static StarBody pnorm_ball(int p, int k);
    static StarBody polynomial(int degree, const std::vector<double>& coefficients);

    int dimension() const noexcept { return k_; }
    BodyKind kind() const noexcept { return static_cast<BodyKind>(shape_.index()); }
    const Shape& shape() const noexcept { return shape_; }

    /// Calls f with the concrete shape; hot loops use this to avoid
    /// dispatching per point.
    template <class F>
    decltype(auto) visit(F&& f) const {
        return std::visit(std::forward<F>(f), shape_);
    }

    /// Checked gauge: throws DomainError on non-finite input.
    double gauge(const Vec3& y) const;
    double gauge_unchecked(const Vec3& y) const noexcept {
        return std::visit([&](const auto& s) { return s(y); }, shape_);
    }

    double volume() const noexcept { return volume_; }
    /// max |y| over the body, including the 1 + 1e-9 safety factor for
    /// numerically maximized bodies.
    double circumradius() const noexcept { return circumradius_; }
    /// Unit direction attaining the circumradius.
    const Vec3& circum_direction() const noexcept { return circum_direction_; }
    /// min over directions of 1/gauge, shrunk by 1e-9 when numerical.
    double inradius() const noexcept { return inradius_; }

private:
    explicit StarBody(Shape shape, int k);
    void derive_constants();

    Shape shape_;
    int k_;
    double volume_ = 0.0;
    double circumradius_ = 0.0;
    Vec3 circum_direction_{1.0, 0.0, 0.0};
    double inradius_ = 0.0;
};

double gauge(const StarBody& body, const Vec3& y);
double volume(const StarBody& body);
double circumradius(const StarBody& body);

/// Volume of the unit ball in R^k.
double unit_ball_volume(int k);

struct LemmaHypotheses {
    bool satisfied = true;
    std::string note;
};

/// Whether the body lies in the class for which the Fourier decay
/// comparison is known (k = 2: smooth boundary, curvature vanishing only
/// at finitely many points of finite contact order; k = 3: convex with
/// analytic boundary).
LemmaHypotheses lemma_hypotheses(const StarBody& body);

}  // namespace lrl
