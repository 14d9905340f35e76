#pragma once

#include <cstdint>
#include <vector>

#include "liftcheck/bundle.hpp"
#include "liftcheck/manifold.hpp"

namespace liftcheck {

// Fixed 64-bit linear congruential generator so reports are reproducible
// across platforms and compilers. The constructor advances the state once
// so nearby seeds do not share their first output.
class Lcg64 {
public:
    explicit Lcg64(uint64_t seed) : state_(seed) { next(); }

    uint64_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    // 53-bit mantissa draw in [0, 1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    uint64_t state_;
};

// One point consumes exactly 2n draws: the n base coordinates in declared
// order, then the n fiber coordinates.
BundlePoint sample_bundle_point(const ManifoldSpec& spec, Lcg64& rng);

std::vector<BundlePoint> sample_bundle_points(const ManifoldSpec& spec,
                                              size_t count, uint64_t seed);

}  // namespace liftcheck
