#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace termrec {

// mt19937_64 with hand-rolled value mappings. std::uniform_*_distribution is
// implementation-defined, so seeded streams would not reproduce across
// standard libraries; these mappings are fixed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive bounds; modulo mapping (bias negligible for our ranges)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Knuth's product method; fine for the small means we use.
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        double p = 1.0;
        int k = 0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace termrec
