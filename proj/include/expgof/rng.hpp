// Deterministic random number generation for the bootstrap and Monte Carlo
// machinery. Every consumer receives an explicit stream derived from a root
// seed and a key path, so results are reproducible bit-for-bit regardless of
// the number of worker threads or the order in which work items execute.
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace expgof {

// Stateless finalizer from splitmix64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256** (Blackman & Vigna), seeded through splitmix64.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// A self-contained uniform/exponential/normal/gamma variate stream. The
// samplers are implemented here rather than through <random> so that a given
// (seed, key path) reproduces identical draws on every platform and standard
// library.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_.next(); }

    // Uniform on [0, 1); 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_.next() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1); rejects the (measure ~2^-53) exact zero so that
    // logarithms stay finite.
    double uniform_pos() {
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // Box-Muller; the sine partner is discarded to keep per-draw consumption
    // deterministic at exactly two uniforms.
    double normal01() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double theta = 6.283185307179586476925286766559 * uniform01();
        return r * std::cos(theta);
    }

    // Marsaglia-Tsang squeeze method, unit scale. Shapes below one are lifted
    // via the boost G(a) = G(a+1) * U^{1/a}.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double boost = std::pow(uniform_pos(), 1.0 / shape);
            return gamma(shape + 1.0) * boost;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal01();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

  private:
    Xoshiro256 engine_;
};

// Derives a child seed from a root seed and a key path. Independent paths
// yield statistically independent streams; the same path always yields the
// same stream.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t state = mix64(root ^ 0x6A09E667F3BCC909ULL);
    for (std::uint64_t key : keys) {
        state = mix64(state + 0x9E3779B97F4A7C15ULL * (key + 1));
    }
    return state;
}

inline RngStream derive_stream(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
    return RngStream(derive_seed(root, keys));
}

}  // namespace expgof
