#pragma once

#include <stdexcept>
#include <string>

#include "liftcheck/manifold.hpp"

namespace liftcheck {

// Raised on any malformed input; messages carry "name:line:" prefixes.
struct SpecFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the chart description format:
//
//   [manifold]            name, dim, coords (comma separated)
//   [metric]              g[j][i] = "expr"; one triangle suffices, the
//                         mirror entry is filled in; absent off-diagonal
//                         entries default to zero
//   [domain]              <coord> = lo, hi per coordinate and a mandatory
//                         fiber = lo, hi applied to every fiber coordinate
//   [vectorfield.NAME]    X[i] = "expr" (missing components are zero)
//   [oneform.NAME]        w[i] = "expr"
//
// '#' starts a comment. Expressions may reference the declared coordinates
// only. The metric determinant is probed at every corner of the domain box
// and the file is rejected if any probe is within 1e-12 of zero.
ManifoldSpec parse_spec_text(const std::string& text, const std::string& name);

ManifoldSpec load_spec_file(const std::string& path);

}  // namespace liftcheck
