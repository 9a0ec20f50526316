#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fraclab {

// splitmix64. Counter-friendly: hashing (seed, index) gives independent
// streams, so parallel schedules cannot change what any task draws.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ull + (index << 6) + (index >> 2));
    std::uint64_t a = splitmix64(s);
    return splitmix64(s) ^ a;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // discard a few outputs so small seeds decorrelate
        next();
        next();
    }

    static Rng stream(std::uint64_t master_seed, std::uint64_t task_index) {
        return Rng(hash_combine(master_seed, task_index));
    }

    std::uint64_t next() { return splitmix64(state_); }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const double u = uniform();
        auto k = static_cast<std::uint64_t>(u * static_cast<double>(n));
        return k >= n ? n - 1 : k;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fraclab
