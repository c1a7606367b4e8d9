#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace scdma {

// splitmix64; used both as a stream generator and as a key mixer for
// counter-based substreams (seed, snr_index, trial_index).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ULL;
    k ^= splitmix64(s);
    s ^= b + 0x165667b19e3779f9ULL;
    k ^= splitmix64(s);
    return k;
}

// Small deterministic generator (xoroshiro128+ seeded via splitmix64).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        s0_ = splitmix64(seed);
        s1_ = splitmix64(seed);
    }

    std::uint64_t next_u64() {
        std::uint64_t a = s0_, b = s1_;
        std::uint64_t r = a + b;
        b ^= a;
        s0_ = rotl(a, 24) ^ b ^ (b << 16);
        s1_ = rotl(b, 37);
        return r;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    // standard complex Gaussian CN(0, variance): each real part variance/2
    std::complex<double> cgaussian(double variance);

    double gaussian();

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s0_, s1_;
};

inline double Rng::gaussian() {
    // Box-Muller
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

inline std::complex<double> Rng::cgaussian(double variance) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-std::log(u1) * variance);
    double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace scdma
