#pragma once

#include <cmath>
#include <cstdint>

namespace brw {

// splitmix64 step (Vigna 2015). Also used as the mixing function that
// derives independent replicate streams from (seed, stream index).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-replicate random stream. Stream k of seed s is
// statistically independent of stream k' != k and bit-reproducible
// across platforms (no std::<distribution> involved anywhere).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index) {
        // whiten the (seed, index) pair before using it as a state
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64_next(s);
        s = a ^ (stream_index * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
        splitmix64_next(s);
        state_ = s;
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // uniform on (0, 1); never returns exactly 0 or 1
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential() { return -std::log(uniform()); }

    // Box-Muller; caches the second variate
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace brw
