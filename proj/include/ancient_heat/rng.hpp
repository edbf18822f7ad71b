#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ancient_heat {

// Seeded generator behind all randomness (graphs, fields). Uniform doubles are
// derived from raw 64-bit draws by a fixed formula rather than
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi]
    int uniform_int(int lo, int hi) {
        return lo + int(eng_() % std::uint64_t(hi - lo + 1));
    }

    std::vector<double> field(int n, double lo = -1.0, double hi = 1.0) {
        std::vector<double> a(static_cast<std::size_t>(n));
        for (auto& v : a) v = uniform(lo, hi);
        return a;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace ancient_heat
