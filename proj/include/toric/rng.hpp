#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace toric {

/// Deterministic splitmix64 stream; used instead of <random> distributions so
/// that fixed-seed runs are bit-stable across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1].
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Real standard normal (Box-Muller).
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = next_unit();
        double v = next_unit();
        double r = std::sqrt(-2.0 * std::log(u));
        double t = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Complex standard normal with E|z|^2 = 1.
    std::complex<double> next_complex_gaussian() {
        const double s = std::numbers::sqrt2;
        return {next_gaussian() / s, next_gaussian() / s};
    }

    /// Independent child stream (for per-path splitting).
    Rng split(std::uint64_t salt) {
        Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace toric
