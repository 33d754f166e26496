#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aitstar {

// Seeded random stream with fully specified output. std::mt19937_64 is
// pinned by the standard; the double conversions below avoid the
// implementation-defined std::uniform_real_distribution so identical seeds
// give identical sequences everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Index in [0, n).
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

    // Standard normal via the Marsaglia polar method.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * factor;
        has_cached_ = true;
        return u * factor;
    }

  private:
    std::mt19937_64 gen_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace aitstar
