#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "lrl/geometry.hpp"

namespace lrl {

/// Fourier transform of the indicator, int_D exp(-2 pi i <xi, y>) dy.
/// Balls and ellipsoids use closed forms in k = 2 and 3; other planar bodies
/// use chi_hat_quadrature. chi_hat(0) is the volume.
std::complex<double> chi_hat(const StarBody& body, const Vec3& xi);

/// The quadrature route for any planar star body: in polar coordinates the
/// radial integral is elementary,
///   int_0^rho(phi) e^{-i a r} r dr = rho^2 f(a rho),  a = 2 pi <xi, u(phi)>,
/// leaving a smooth periodic integral over the boundary parameter phi that is
/// evaluated by adaptive Gauss-Kronrod panels. Panels are split while the
/// phase varies by more than pi across them, then refined until the error
/// estimate is below max(1e-9 |result|, 1e-14).
std::complex<double> chi_hat_quadrature(const StarBody& body, const Vec3& xi);

struct DecaySample {
    Vec3 direction;
    double phi = 0.0;    // azimuth
    double polar = 0.0;  // polar angle from the last axis (k = 3 only)
    double r = 0.0;
    double magnitude = 0.0;
};

struct EnvelopeEstimate {
    int k = 2;
    std::vector<Vec3> directions;
    std::vector<double> phi;
    std::vector<double> psi;             // max_r |chi_hat(r u)| r^{(k+1)/2}
    std::vector<double> decay_exponent;  // log-log slope of the upper envelope of |chi_hat|
    double r_min = 1.0;
    double r_max = 1.0;
    std::vector<double> radii;
    std::vector<DecaySample> samples;    // direction-major
};

/// Uniform directions: k = 2 angles 2 pi j / n (axes included when 4 | n);
/// k = 3 a Fibonacci sphere lattice.
std::vector<Vec3> direction_grid(int k, int n);

/// Geometric grid of n points from lo to hi (n = 1 gives {lo}).
std::vector<double> geometric_radii(double lo, double hi, int n);

/// psi(u) = max over the geometric r-grid of |chi_hat(r u)| r^{(k+1)/2}.
EnvelopeEstimate decay_envelope(const StarBody& body, int n_directions, double r_min, double r_max, int n_radii);

/// Same envelope on explicit radii.
EnvelopeEstimate decay_envelope_on(const StarBody& body, const std::vector<Vec3>& directions,
                                   const std::vector<double>& radii);

/// Normalized discrete L^p norms (mean of psi^p)^{1/p}, computed relative to
/// max psi so large p does not overflow.
std::vector<std::pair<double, double>> lp_report(const EnvelopeEstimate& estimate, const std::vector<double>& p_list);

/// CSV: phi,r,magnitude,magnitude_times_r_pow (k = 3 adds polar after phi).
std::string decay_csv(const EnvelopeEstimate& estimate);

}  // namespace lrl
