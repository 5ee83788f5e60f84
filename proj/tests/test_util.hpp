#pragma once

#include <cstdint>
#include <random>

#include "planode/linalg2.hpp"

namespace planode::testing {

/// Engine output mapped through the 53-bit ladder so streams do not depend
/// on the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(
                                                  hi - lo + 1));
    }
    double sign() { return (eng_() & 1u) != 0u ? 1.0 : -1.0; }

  private:
    std::mt19937_64 eng_;
};

inline Mat2 random_invertible(Rng& rng, double min_det = 0.3) {
    while (true) {
        const Mat2 Q{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                     rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        if (std::fabs(Q.det()) >= min_det) {
            return Q;
        }
    }
}

inline Mat2 conjugate(const Mat2& core, const Mat2& Q) {
    return Q * core * Q.inverse();
}

}  // namespace planode::testing
