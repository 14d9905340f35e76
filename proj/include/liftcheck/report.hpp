#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liftcheck/killing.hpp"

namespace liftcheck {

inline constexpr const char* kToolVersion = "0.1.0";

// Pass/Fail entries assert residual <= tolerance; Reported entries carry a
// measured magnitude that no tolerance constrains (the tolerance column
// then records the zero-predicate threshold used elsewhere in the run).
enum class Verdict { Pass, Fail, Reported };

const char* verdict_name(Verdict v);

// One measured check: a residual against a tolerance. `equation` ties the
// entry to the formula family it exercises (E1..E17, T1, T2a, T2b).
struct CheckEntry {
    std::string id;
    std::string equation;
    std::string field;  // empty when not field-specific
    std::string lift;   // empty when not lift-specific
    double max_abs_residual = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Fail;
};

CheckEntry make_entry(std::string id, std::string equation, std::string field,
                      std::string lift, double residual, double tolerance);
CheckEntry make_reported(std::string id, std::string equation, std::string field,
                         std::string lift, double residual, double threshold);

struct CheckReport {
    std::string tool_version = kToolVersion;
    std::string spec_name;
    uint64_t seed = 0;
    size_t points = 0;
    std::vector<CheckEntry> entries;
    std::vector<TheoremAudit> audits;
};

bool all_pass(const CheckReport& r);              // entries pass, no counterexamples
size_t count_problems(const CheckReport& r);      // failed entries + flagged audits

// Stable key order, no timestamps, no paths: byte-identical for a fixed
// (spec, seed, version) triple.
std::string report_to_json(const CheckReport& r);
std::string reports_to_json(const std::vector<CheckReport>& rs, uint64_t seed,
                            size_t points);

std::string render_report(const CheckReport& r);  // aligned human table

}  // namespace liftcheck
