#pragma once

#include <cstdint>

namespace spinsq {

/// Stateless 64-bit mixer (splitmix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: the value at (key, counter) does not depend on the
/// order in which values are drawn, so shots and realizations can be sampled
/// in any order or in parallel and still reproduce bit for bit.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0)
        : key_(mix64(key ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

    /// Independent child stream, e.g. one per shot index.
    CounterRng split(std::uint64_t index) const { return CounterRng(key_, index + 1); }

    std::uint64_t operator()() { return mix64(key_ + mix64(counter_++)); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace spinsq
