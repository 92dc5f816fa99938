#pragma once

#include <cstdint>
#include <random>

namespace clonesim {

// All Monte Carlo in the project draws from std::mt19937_64, whose output
// sequence is fixed by the standard. Uniform doubles are built from the top
// 53 bits directly so results do not depend on the library's distribution
// implementations.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }

 private:
    std::mt19937_64 engine_;
};

}  // namespace clonesim
