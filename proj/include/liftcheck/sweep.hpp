#pragma once

#include <functional>
#include <vector>

#include "liftcheck/bundle.hpp"

namespace liftcheck {

enum class SweepMode { Serial, Parallel };

struct SweepResult {
    std::vector<double> residuals;  // one entry per sample point
    double max_value = 0.0;
    size_t argmax = 0;  // lowest index on ties
};

// Evaluates `fn` at every point into a preallocated slot, then reduces
// serially, so serial and parallel runs are bitwise identical: the parallel
// path only changes which thread fills which slot. Exceptions thrown by
// `fn` are captured inside the loop and rethrown once it finishes.
SweepResult sweep_max(const std::vector<BundlePoint>& points,
                      const std::function<double(const BundlePoint&)>& fn,
                      SweepMode mode = SweepMode::Parallel);

// reduction shared by both paths; exposed for tests
SweepResult reduce_residuals(std::vector<double> residuals);

}  // namespace liftcheck
