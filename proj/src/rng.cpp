#include "lrl/rng.hpp"

#include <cmath>
#include <numbers>

namespace lrl {

std::uint64_t mix64(std::uint64_t z) noexcept {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::at(std::uint64_t index) const noexcept {
    const std::uint64_t key = mix64(seed_ ^ mix64(stream_ + 0x632be59bd9b4e019ULL));
    return mix64(key + mix64(index));
}

double CounterRng::normal() noexcept {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-54;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CounterRng CounterRng::substream(std::uint64_t id) const noexcept {
    return CounterRng(seed_, mix64(stream_ * 0x9e3779b97f4a7c15ULL + id + 1), 0);
}

}  // namespace lrl
