#include "lrl/bessel.hpp"

#include <cmath>
#include <numbers>

namespace lrl {
namespace {

constexpr double kSwitchover = 12.0;

double j1_series(double z) {
    const double h = 0.5 * z;
    const double h2 = h * h;
    double term = h;  // m = 0: (z/2) / (0! 1!)
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -h2 / (static_cast<double>(m) * (m + 1));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// J_1(z) ~ sqrt(2/(pi z)) (P cos chi - Q sin chi), chi = z - 3pi/4, with
// a_j = prod_{i=1..j} (mu - (2i-1)^2) / (j! 8^j), mu = 4.
double j1_asymptotic(double z) {
    constexpr double mu = 4.0;
    double p = 0.0, q = 0.0;
    double a = 1.0;  // a_j / z^j
    double prev = INFINITY;
    for (int j = 0; j < 200; ++j) {
        if (std::abs(a) > prev) break;  // series started diverging
        prev = std::abs(a);
        // contributes (-1)^{j/2} a to P for even j, (-1)^{(j-1)/2} a to Q for odd j
        switch (j % 4) {
            case 0: p += a; break;
            case 1: q += a; break;
            case 2: p -= a; break;
            case 3: q -= a; break;
        }
        if (std::abs(a) < 1e-17) break;
        const double odd = 2.0 * j + 1.0;
        a *= (mu - odd * odd) / ((j + 1.0) * 8.0 * z);
    }
    const double chi = z - 0.75 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j1(double z) {
    if (std::isnan(z)) return z;
    if (z < 0.0) return -bessel_j1(-z);
    return z < kSwitchover ? j1_series(z) : j1_asymptotic(z);
}

}  // namespace lrl
