#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace gseq {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Stream-split rule: substream i of a master seed s is seeded with
/// splitmix64(s + (i + 1) * 0x9E3779B97F4A7C15). All parallel work derives
/// its randomness this way, so results do not depend on worker count.
inline constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ull);
}

/// Seeded generator with self-contained bounded draws (mask rejection),
/// so sequences are stable across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // Uniform in [0, n); n >= 1.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t mask = ~0ull >> std::countl_zero(n - 1);
        for (;;) {
            const std::uint64_t v = eng_() & mask;
            if (v < n) return v;
        }
    }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

/// Draw source that replays a prescribed index sequence; lets tests
/// enumerate a sampler's entire decision tree.
class ReplaySource {
public:
    explicit ReplaySource(std::vector<std::uint64_t> draws) : draws_(std::move(draws)) {}

    std::uint64_t below(std::uint64_t n) {
        if (cursor_ >= draws_.size()) throw std::logic_error("ReplaySource exhausted");
        const std::uint64_t v = draws_[cursor_++];
        if (v >= n) throw std::logic_error("ReplaySource draw out of bound");
        return v;
    }

private:
    std::vector<std::uint64_t> draws_;
    std::size_t cursor_ = 0;
};

/// Draw source that records the bound of every request (answering 0),
/// used to discover a sampler's fixed draw-bound profile.
class BoundRecorder {
public:
    std::uint64_t below(std::uint64_t n) {
        bounds.push_back(n);
        return 0;
    }
    std::vector<std::uint64_t> bounds;
};

} // namespace gseq
