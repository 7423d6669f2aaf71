#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace deaos {

/// Deterministic random stream threaded through every stochastic choice of a run.
///
/// All draws are derived from the raw mt19937_64 output with fixed arithmetic,
/// never from standard-library distribution objects, so a seed reproduces the
/// exact same sequence independent of the standard library in use. One stream
/// per run; identical seed + identical call sequence gives identical outputs.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53 bits of entropy.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    /// Uniform integer in [lo, hi], both ends inclusive.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(uniform_index(static_cast<std::size_t>(hi - lo + 1)));
    }

    /// Standard normal deviate (Box-Muller); consumes exactly two uniforms.
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    /// Fills `out` with mutually distinct indices from [0, n), all different
    /// from `exclude`. Requires n > out.size() (strictly, counting the exclusion).
    void distinct_indices(std::span<std::size_t> out, std::size_t n, std::size_t exclude) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            for (;;) {
                const std::size_t candidate = uniform_index(n);
                if (candidate == exclude)
                    continue;
                bool seen = false;
                for (std::size_t j = 0; j < k; ++j)
                    seen = seen || out[j] == candidate;
                if (!seen) {
                    out[k] = candidate;
                    break;
                }
            }
        }
    }

  private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive well-separated sub-seeds from a master
/// seed plus integer identifiers (candidate id, instance id, ...).
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return mix_seed(mix_seed(a) ^ b); }

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b) ^ c);
}

} // namespace deaos
