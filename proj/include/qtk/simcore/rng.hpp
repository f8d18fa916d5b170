#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace qtk {

/// Explicitly seeded random source. Children are derived from the seed and a
/// stream id only, so a child never depends on how much the parent was used.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), eng_(mix(seed)) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return eng_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    /// Uniform in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_); }
    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
    }

    Rng split(std::uint64_t stream) const { return Rng(derive(seed_, {stream})); }

    static std::uint64_t mix(std::uint64_t z);
    static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
    static std::uint64_t hash(std::string_view text);

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace qtk
