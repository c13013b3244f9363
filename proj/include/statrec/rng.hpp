#pragma once

#include <cstdint>
#include <string_view>

namespace statrec {

// All randomness in the library flows through this generator so that runs are
// bit-reproducible across platforms. std::mt19937_64 would be portable but
// the standard distributions are not, so bounded ints and doubles are derived
// by hand. Algorithm identifier recorded in run metadata: see kRngAlgorithm.
inline constexpr std::string_view kRngAlgorithm = "splitmix64+xoshiro256**";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream derivation: hash(base_seed, index) so parallel trials are
// order-independent.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL + index);
    std::uint64_t h = splitmix64(s);
    return h ^ splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased integer in [0, n) by rejection on the top bits.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            std::uint64_t hi;
            std::uint64_t lo = mul128(r, n, hi);
            if (lo >= threshold) return hi;
        }
    }

    int int_below(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mul128(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
        unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<std::uint64_t>(prod >> 64);
        return static_cast<std::uint64_t>(prod);
    }

    std::uint64_t state_[4];
};

}  // namespace statrec
