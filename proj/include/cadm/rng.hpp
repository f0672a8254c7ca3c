// Counter-based random number generation (Philox4x64-10).
//
// Each (seed, stream) pair indexes an independent sequence: the 128-bit key
// is (seed, stream) and the 256-bit counter walks through blocks of four
// 64-bit outputs. Streams never overlap, which makes parallel simulation
// runs reproducible regardless of scheduling.

#ifndef CADM_RNG_HPP
#define CADM_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cadm {

namespace philox {

inline constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
inline constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

/// One 10-round Philox4x64 block: counter + key -> four 64-bit words.
inline std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                          std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMult0, ctr[0], hi0, lo0);
        mulhilo(kMult1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

}  // namespace philox

/**
 * A single Philox stream with convenience draws for the simulation layer.
 * The counter is incremented before each block, so the first block uses
 * counter 1 (matching the numpy Philox convention, which the known-answer
 * tests rely on).
 */
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{seed, stream}, counter_{0, 0, 0, 0} {}

    /// Next raw 64-bit word.
    std::uint64_t next_u64() {
        if (buffer_pos_ == 4) {
            increment_counter();
            buffer_ = philox::block(counter_, key_);
            buffer_pos_ = 0;
        }
        return buffer_[buffer_pos_++];
    }

    /// Uniform double strictly inside (0, 1).
    double uniform() {
        const std::uint64_t bits53 = next_u64() >> 11;
        return (static_cast<double>(bits53) + 0.5) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (uses two uniforms per pair, caches one).
    double gaussian() {
        if (have_cached_gaussian_) {
            have_cached_gaussian_ = false;
            return cached_gaussian_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_gaussian_ = radius * std::sin(angle);
        have_cached_gaussian_ = true;
        return radius * std::cos(angle);
    }

    /// Index draw from an unnormalized nonnegative weight vector.
    template <typename Derived>
    int categorical(const Derived& weights) {
        const double total = [&] {
            double t = 0.0;
            for (int i = 0; i < int(weights.size()); ++i) t += double(weights[i]);
            return t;
        }();
        if (!(total > 0.0)) throw std::invalid_argument("categorical: weights sum to zero");
        double target = uniform() * total;
        for (int i = 0; i < int(weights.size()); ++i) {
            target -= double(weights[i]);
            if (target <= 0.0) return i;
        }
        return int(weights.size()) - 1;  // round-off fallthrough
    }

    /// One draw from the flat Dirichlet over `n` categories.
    std::vector<double> dirichlet_uniform(int n) {
        std::vector<double> g(static_cast<std::size_t>(n));
        double total = 0.0;
        for (auto& v : g) {
            v = -std::log(uniform());  // Exp(1)
            total += v;
        }
        for (auto& v : g) v /= total;
        return g;
    }

private:
    void increment_counter() {
        for (auto& word : counter_)
            if (++word != 0) break;
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> buffer_{};
    int buffer_pos_ = 4;
    double cached_gaussian_ = 0.0;
    bool have_cached_gaussian_ = false;
};

}  // namespace cadm

#endif  // CADM_RNG_HPP
