#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liftcheck/manifold.hpp"
#include "liftcheck/oracle.hpp"
#include "liftcheck/report.hpp"
#include "liftcheck/sweep.hpp"

namespace liftcheck {

struct CheckOptions {
    size_t points = 50;
    uint64_t seed = 0;
    double tol_override = -1.0;  // < 0 keeps per-check defaults
    SweepMode mode = SweepMode::Parallel;
};

// Bundle metric block structure, inverse product, and the adapted-frame
// connection coefficients against the induced-coordinate rebuild.
CheckReport run_connection_checks(const Manifold& m, const Oracle& oracle,
                                  const CheckOptions& opt);

// Every lift equation for one field: lift components, covariant
// derivatives, rotations, Lie derivatives, associated covectors, plus the
// theorem audits and the second-derivative exchange identities.
CheckReport run_classify(const Manifold& m, const Oracle& oracle,
                         const std::string& field, const CheckOptions& opt);

// Closedness of the complete lift of the associated covector versus the
// base conditions (symmetric derivative, vanishing second derivative).
CheckReport run_closedness(const Manifold& m, const std::string& field,
                           const CheckOptions& opt);

// Everything above for every declared field, plus finite-difference audits
// of the symbolic derivative tables. One report per spec.
CheckReport run_spec_suite(const Manifold& m, const Oracle& oracle,
                           const CheckOptions& opt);

}  // namespace liftcheck
