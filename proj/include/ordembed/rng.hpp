/// @file  rng.hpp
/// @brief Seeded random streams with deterministic stream derivation.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ordembed {

/// SplitMix64 finalizer. Spreads user seeds over the full 64-bit range.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of derived stream `counter` under `root`. The scheme is a pure
/// function of (root, counter), so adding streams never perturbs the
/// sequences drawn from existing ones.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t counter) {
    return mix_seed(root ^ mix_seed(counter));
}

/// Deterministic random stream. The engine is std::mt19937_64 (its output
/// sequence is pinned by the standard); the floating-point conversions are
/// done by hand so draws do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 bits of mantissa.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Uniform index in [0, n). Precondition: n > 0.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    /// Child stream; independent of draws already made from this one.
    Rng derive(std::uint64_t counter) const {
        return Rng(derive_seed(seed_, counter));
    }

private:
    std::uint64_t seed_ = 0;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ordembed
