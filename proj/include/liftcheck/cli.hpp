#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liftcheck {

// Runs one command line (without the program name). Exit codes: 0 when all
// selected checks pass and no theorem audit flags a counterexample
// candidate, 1 otherwise, 2 on input errors (bad files, unknown fields,
// malformed flags).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace liftcheck
