#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace dysonclt {

// splitmix64 (Steele/Lea/Flood).  Used to expand seeds, never as the main
// generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic sub-seed for a labeled stream, e.g. matrix entry (i,j) or
// Monte Carlo sample index.  The result depends only on (root, a, b), never
// on instantiation order, so entries sampled through any submatrix and
// samples drawn by any worker layout reproduce bit-for-bit.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = root;
    std::uint64_t h = splitmix64(s);
    s ^= 0x9E3779B97F4A7C15ull * (a + 1);
    h ^= splitmix64(s);
    s ^= 0xD1B54A32D192ED03ull * (b + 1);
    h ^= splitmix64(s);
    return h;
}

// xoshiro256++ (Blackman/Vigna), seeded by the reference splitmix64 expansion.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Strictly inside (0,1), so Box-Muller never sees log(0).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dysonclt
