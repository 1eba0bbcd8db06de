#pragma once

#include <complex>
#include <cstdint>
#include <cmath>

namespace isolab {

/// Deterministic random stream. Wraps a 64-bit Mersenne-Twister state but
/// derives uniform/normal variates from raw bits directly, so sequences are
/// identical across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {
        for (int i = 0; i < 8; ++i) next_bits();
    }

    std::uint64_t next_bits() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Complex standard normal (unit total variance).
    std::complex<double> cnormal() {
        const double s = 0.70710678118654752440;
        return {s * normal(), s * normal()};
    }

    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) { return next_bits() % n; }

    /// Derives an independent stream, e.g. one per named check.
    Rng fork(std::uint64_t salt) const {
        return Rng(state_ ^ (salt * 0xd6e8feb86659fd93ULL + 0x2545f4914f6cdd1dULL));
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// FNV-1a, used to salt per-check random streams with the check name.
inline std::uint64_t fnv1a(const char* s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 0x100000001b3ULL;
    return h;
}

} // namespace isolab
