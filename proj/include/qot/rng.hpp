#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qot {

// Seeded generator with explicitly-coded distributions. std::normal_distribution
// and std::sample are implementation-defined sequences; these are not, so streams
// stay reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal via Box-Muller (two fresh uniforms per call).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Uniform integer in [0, n) by rejection; unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = eng_();
        while (x >= limit) x = eng_();
        return x % n;
    }

    /// k distinct values from [lo, hi], partial Fisher-Yates, sorted ascending.
    std::vector<std::uint64_t> sample_distinct(std::uint64_t lo, std::uint64_t hi, std::size_t k);

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

} // namespace qot
