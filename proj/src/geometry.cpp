#include "lrl/geometry.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

#include "lrl/error.hpp"
#include "quadrature.hpp"

namespace lrl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSphereSamples = 10000;
constexpr double kSafety = 1e-9;

void require_dimension(int k) {
    if (k != 2 && k != 3) throw BodyInvalid("dimension must be 2 or 3, got " + std::to_string(k));
}

double ipow(double x, int n) noexcept {
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

Vec3 circle_point(double phi) { return {std::cos(phi), std::sin(phi), 0.0}; }

// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200 && (b - a) > 1e-15; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rotation

Rotation Rotation::identity(int k) {
    require_dimension(k);
    Rotation r;
    r.k_ = k;
    r.m_ = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    return r;
}

Rotation Rotation::from_angle(double angle) {
    if (!std::isfinite(angle)) throw DomainError("rotation angle must be finite");
    Rotation r;
    r.k_ = 2;
    double a = std::fmod(angle, kTwoPi);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    r.angle_ = a;
    const double c = std::cos(a), s = std::sin(a);
    r.m_ = {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
    return r;
}

Rotation Rotation::from_quaternion(std::array<double, 4> q) {
    const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    if (!std::isfinite(n) || n == 0.0) throw DomainError("quaternion must be finite and nonzero");
    for (auto& c : q) c /= n;
    Rotation r;
    r.k_ = 3;
    r.quat_ = q;
    const auto [w, x, y, z] = q;
    r.m_ = {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
    return r;
}

Vec3 Rotation::apply(const Vec3& v) const noexcept {
    if (k_ == 2) return {m_[0][0] * v[0] + m_[0][1] * v[1], m_[1][0] * v[0] + m_[1][1] * v[1], 0.0};
    Vec3 out{};
    for (int i = 0; i < 3; ++i) out[i] = m_[i][0] * v[0] + m_[i][1] * v[1] + m_[i][2] * v[2];
    return out;
}

Vec3 Rotation::apply_inverse(const Vec3& v) const noexcept {
    if (k_ == 2) return {m_[0][0] * v[0] + m_[1][0] * v[1], m_[0][1] * v[0] + m_[1][1] * v[1], 0.0};
    Vec3 out{};
    for (int i = 0; i < 3; ++i) out[i] = m_[0][i] * v[0] + m_[1][i] * v[1] + m_[2][i] * v[2];
    return out;
}

RigidMotion RigidMotion::make(const Rotation& rotation, const Vec3& x) {
    Vec3 t{0.0, 0.0, 0.0};
    for (int i = 0; i < rotation.dimension(); ++i) {
        if (!std::isfinite(x[i])) throw DomainError("translation must be finite");
        double r = x[i] - std::floor(x[i]);
        if (r >= 1.0) r = 0.0;
        t[i] = r;
    }
    return RigidMotion{rotation, t};
}

RigidMotion RigidMotion::identity(int k) { return RigidMotion{Rotation::identity(k), {0.0, 0.0, 0.0}}; }

Rotation haar_rotation(int k, CounterRng& rng) {
    require_dimension(k);
    if (k == 2) return Rotation::from_angle(kTwoPi * rng.uniform());
    std::array<double, 4> q{};
    double n2 = 0.0;
    do {
        for (auto& c : q) c = rng.normal();
        n2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
    } while (n2 < 1e-300);
    return Rotation::from_quaternion(q);
}

RigidMotion haar_sample(int k, CounterRng& rng) {
    const Rotation rot = haar_rotation(k, rng);
    Vec3 x{0.0, 0.0, 0.0};
    for (int i = 0; i < k; ++i) x[i] = rng.uniform();
    return RigidMotion::make(rot, x);
}

// ---------------------------------------------------------------------------
// Shapes

double PNormBall::operator()(const Vec3& y) const noexcept {
    if (p == 2) {
        double s = y[0] * y[0] + y[1] * y[1];
        if (k == 3) s += y[2] * y[2];
        return std::sqrt(s);
    }
    if (p == 4) {
        const double a = y[0] * y[0], b = y[1] * y[1];
        double s = a * a + b * b;
        if (k == 3) {
            const double c = y[2] * y[2];
            s += c * c;
        }
        return std::sqrt(std::sqrt(s));
    }
    double m = std::max(std::abs(y[0]), std::abs(y[1]));
    if (k == 3) m = std::max(m, std::abs(y[2]));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += ipow(y[i] / m, p);
    return m * std::pow(s, 1.0 / p);
}

double PolynomialSublevel::evaluate(double x, double y) const noexcept {
    // sum_i c_i x^(h-i) y^i by Horner in y with x powers peeled off.
    double acc = 0.0;
    for (int i = degree; i >= 0; --i) acc = acc * y + coefficients[i] * ipow(x, degree - i);
    return acc;
}

double PolynomialSublevel::operator()(const Vec3& y) const noexcept {
    const double m = std::max(std::abs(y[0]), std::abs(y[1]));
    if (m == 0.0) return 0.0;
    const double v = evaluate(y[0] / m, y[1] / m);
    if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
    return m * std::pow(v, 1.0 / degree);
}

// ---------------------------------------------------------------------------
// StarBody

StarBody::StarBody(Shape shape, int k) : shape_(std::move(shape)), k_(k) {}

StarBody StarBody::ball(int k) {
    require_dimension(k);
    StarBody b(Ball{k}, k);
    b.derive_constants();
    return b;
}

StarBody StarBody::ellipsoid(const std::vector<double>& axes) {
    const int k = static_cast<int>(axes.size());
    require_dimension(k);
    Ellipsoid e;
    e.k = k;
    for (int i = 0; i < k; ++i) {
        if (!std::isfinite(axes[i]) || axes[i] <= 0.0)
            throw BodyInvalid("ellipsoid axes must be positive and finite");
        e.axes[i] = axes[i];
        e.inv_sq[i] = 1.0 / (axes[i] * axes[i]);
    }
    StarBody b(e, k);
    b.derive_constants();
    return b;
}

StarBody StarBody::pnorm_ball(int p, int k) {
    require_dimension(k);
    if (p < 2 || p % 2 != 0) throw BodyInvalid("p must be an even integer >= 2, got " + std::to_string(p));
    if (p > 64) throw BodyInvalid("p must be at most 64");
    StarBody b(PNormBall{k, p}, k);
    b.derive_constants();
    return b;
}

StarBody StarBody::polynomial(int degree, const std::vector<double>& coefficients) {
    if (degree < 2 || degree % 2 != 0)
        throw BodyInvalid("polynomial degree must be an even integer >= 2, got " + std::to_string(degree));
    if (static_cast<int>(coefficients.size()) != degree + 1)
        throw BodyInvalid("polynomial of degree " + std::to_string(degree) + " needs " +
                          std::to_string(degree + 1) + " coefficients, got " +
                          std::to_string(coefficients.size()));
    for (double c : coefficients)
        if (!std::isfinite(c)) throw BodyInvalid("polynomial coefficients must be finite");
    PolynomialSublevel poly{degree, coefficients};
    for (int i = 0; i < kSphereSamples; ++i) {
        const double phi = kTwoPi * i / kSphereSamples;
        const double v = poly.evaluate(std::cos(phi), std::sin(phi));
        if (!(v > 0.0))
            throw BodyInvalid("polynomial is not positive away from the origin (P = " + std::to_string(v) +
                              " at angle " + std::to_string(phi) + ")");
    }
    StarBody b(poly, 2);
    b.derive_constants();
    return b;
}

void StarBody::derive_constants() {
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball>) {
                volume_ = unit_ball_volume(k_);
                circumradius_ = 1.0;
                inradius_ = 1.0;
                circum_direction_ = {1.0, 0.0, 0.0};
            } else if constexpr (std::is_same_v<S, Ellipsoid>) {
                volume_ = unit_ball_volume(k_);
                int imax = 0, imin = 0;
                for (int i = 0; i < k_; ++i) {
                    volume_ *= s.axes[i];
                    if (s.axes[i] > s.axes[imax]) imax = i;
                    if (s.axes[i] < s.axes[imin]) imin = i;
                }
                circumradius_ = s.axes[imax];
                inradius_ = s.axes[imin];
                circum_direction_ = {0.0, 0.0, 0.0};
                circum_direction_[imax] = 1.0;
            } else if constexpr (std::is_same_v<S, PNormBall>) {
                const double p = s.p;
                volume_ = std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), k_) / std::tgamma(1.0 + k_ / p);
                circumradius_ = std::pow(static_cast<double>(k_), 0.5 - 1.0 / p);
                inradius_ = 1.0;
                const double c = 1.0 / std::sqrt(static_cast<double>(k_));
                circum_direction_ = {c, c, k_ == 3 ? c : 0.0};
            } else {
                // Polar quadrature: vol = (1/2) int_0^{2pi} gauge(u)^{-2} dphi.
                auto f = [&](double phi) {
                    const double g = s(circle_point(phi));
                    return 0.5 / (g * g);
                };
                const auto rule = detail::gauss_legendre(16);
                auto composite = [&](int panels) {
                    detail::CompensatedSum acc;
                    const double h = kTwoPi / panels;
                    for (int j = 0; j < panels; ++j) {
                        const double mid = (j + 0.5) * h;
                        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                            acc.add(rule.weights[q] * f(mid + 0.5 * h * rule.nodes[q]));
                    }
                    return 0.5 * h * acc.value();
                };
                double prev = composite(8);
                double err = 0.0;
                bool converged = false;
                for (int panels = 16; panels <= (1 << 14); panels *= 2) {
                    const double cur = composite(panels);
                    err = std::abs(cur - prev);
                    prev = cur;
                    if (err <= 1e-12) {
                        converged = true;
                        break;
                    }
                }
                if (!converged) throw QuadratureError("polynomial body volume did not converge to 1e-12", err);
                volume_ = prev;

                // Extremes of 1/gauge on the circle: grid then golden-section refinement.
                auto inv_gauge = [&](double phi) { return 1.0 / s(circle_point(phi)); };
                int best_max = 0, best_min = 0;
                std::vector<double> vals(kSphereSamples);
                for (int i = 0; i < kSphereSamples; ++i) {
                    vals[i] = inv_gauge(kTwoPi * i / kSphereSamples);
                    if (vals[i] > vals[best_max]) best_max = i;
                    if (vals[i] < vals[best_min]) best_min = i;
                }
                const double step = kTwoPi / kSphereSamples;
                const double phi_max = golden_max(inv_gauge, (best_max - 1) * step, (best_max + 1) * step);
                const double phi_min = golden_max([&](double p) { return -inv_gauge(p); },
                                                  (best_min - 1) * step, (best_min + 1) * step);
                circumradius_ = std::max(inv_gauge(phi_max), vals[best_max]) * (1.0 + kSafety);
                inradius_ = std::min(inv_gauge(phi_min), vals[best_min]) * (1.0 - kSafety);
                circum_direction_ = circle_point(inv_gauge(phi_max) >= vals[best_max]
                                                     ? phi_max
                                                     : best_max * step);
            }
        },
        shape_);
}

double StarBody::gauge(const Vec3& y) const {
    for (int i = 0; i < k_; ++i)
        if (!std::isfinite(y[i])) throw DomainError("gauge argument must be finite");
    return gauge_unchecked(y);
}

double gauge(const StarBody& body, const Vec3& y) { return body.gauge(y); }
double volume(const StarBody& body) { return body.volume(); }
double circumradius(const StarBody& body) { return body.circumradius(); }

double unit_ball_volume(int k) {
    require_dimension(k);
    return k == 2 ? std::numbers::pi : 4.0 * std::numbers::pi / 3.0;
}

LemmaHypotheses lemma_hypotheses(const StarBody& body) {
    LemmaHypotheses h;
    switch (body.kind()) {
        case BodyKind::Ball:
        case BodyKind::Ellipsoid:
            h.note = "convex, analytic boundary, positive curvature";
            break;
        case BodyKind::PNormBall: {
            const int p = std::get<PNormBall>(body.shape()).p;
            h.note = p == 2 ? "convex, analytic boundary, positive curvature"
                            : "convex, analytic boundary, curvature vanishes where the boundary meets the "
                              "coordinate axes (contact order " + std::to_string(p) + ")";
            break;
        }
        case BodyKind::PolynomialSublevel:
            // grad P . y = h P = h on the level set, so the boundary is a
            // regular analytic curve and its curvature has isolated zeros.
            h.note = "analytic boundary; curvature zeros are isolated with finite contact order";
            break;
    }
    return h;
}

}  // namespace lrl
