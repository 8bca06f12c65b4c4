#pragma once

#include <cstdint>

namespace lrl {

/// Counter-based random stream: each value is a pure function of
/// (seed, stream id, draw index), so parallel workers that own distinct
/// stream ids reproduce the same draws regardless of scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) noexcept
        : seed_(seed), stream_(stream), index_(index) {}

    std::uint64_t next_u64() noexcept { return at(index_++); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal variate (Box-Muller, one value per two draws).
    double normal() noexcept;

    std::uint64_t at(std::uint64_t index) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t index() const noexcept { return index_; }

    /// Derived stream for sub-task `id`; distinct ids give independent streams.
    CounterRng substream(std::uint64_t id) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace lrl
