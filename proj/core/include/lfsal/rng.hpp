#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

// Small splitmix64 generator. Used instead of <random> distributions so every
// seeded draw is bit-reproducible across standard libraries and platforms.

namespace lfsal {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return (double)(next_u64() >> 11) * 0x1.0p-53; }  // [0,1)

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    std::size_t uniform_index(std::size_t n) { return (std::size_t)(uniform() * (double)n); }

    double normal() {
        // Box-Muller; consumes two uniforms per call.
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }
};

}  // namespace lfsal
