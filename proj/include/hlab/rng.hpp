#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hlab {

// 64-bit seed for an experiment. Substreams are derived by hashing
// (seed, purpose, index), so parallel trials replay identically no matter
// how work is scheduled.
struct Seed {
    std::uint64_t value = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// Counter-based generator: the stream is a pure function of (key, counter),
// so identical (seed, parameters) yield bit-identical draws.
class Rng {
  public:
    explicit Rng(Seed seed) : key_(detail::mix64(seed.value)) {}

    Rng substream(std::string_view purpose, std::uint64_t index = 0) const {
        Rng r(Seed{0});
        r.key_ = detail::mix64(key_ ^ detail::mix64(detail::hash_str(purpose) + 0x9e3779b97f4a7c15ULL * index));
        r.counter_ = 0;
        r.have_spare_ = false;
        return r;
    }

    std::uint64_t next_u64() { return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (own implementation: std::normal_distribution
    // is not stable across standard libraries)
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    // ±1 with equal probability
    int rademacher() { return (next_u64() & 1) ? 1 : -1; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace hlab
