#pragma once

namespace lrl {

/// Bessel function of the first kind, order one. Power series below
/// |z| = 12, Hankel asymptotic expansion above.
double bessel_j1(double z);

}  // namespace lrl
