#pragma once

#include <array>
#include <cstdint>
#include <cstddef>

namespace loewner {

// Counter-based seeding (splitmix64) feeding a xoshiro256++ state.
// One independent stream per run, derived from (master seed, stream index),
// so parameter sweeps are reproducible no matter how cells are scheduled.
class Rng {
public:
    static Rng from_seed(std::uint64_t seed) {
        Rng r;
        std::uint64_t x = seed;
        for (auto& w : r.s_) w = splitmix(x);
        if ((r.s_[0] | r.s_[1] | r.s_[2] | r.s_[3]) == 0) r.s_[0] = 1;
        return r;
    }

    static Rng stream(std::uint64_t master, std::uint64_t index) {
        std::uint64_t x = master;
        std::uint64_t a = splitmix(x);
        std::uint64_t y = index + 0x9E3779B97F4A7C15ull;
        std::uint64_t b = splitmix(y);
        return from_seed(a ^ (b + 0x2545F4914F6CDD1Dull));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Uniform index in [0, n), n >= 1.
    std::size_t index_below(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t splitmix(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace loewner
