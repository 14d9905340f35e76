#include "liftcheck/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace liftcheck {

using nlohmann::ordered_json;

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Reported: return "reported";
    }
    return "fail";
}

CheckEntry make_entry(std::string id, std::string equation, std::string field,
                      std::string lift, double residual, double tolerance) {
    CheckEntry e;
    e.id = std::move(id);
    e.equation = std::move(equation);
    e.field = std::move(field);
    e.lift = std::move(lift);
    e.max_abs_residual = residual;
    e.tolerance = tolerance;
    e.verdict = residual <= tolerance ? Verdict::Pass : Verdict::Fail;
    return e;
}

CheckEntry make_reported(std::string id, std::string equation, std::string field,
                         std::string lift, double residual, double threshold) {
    CheckEntry e = make_entry(std::move(id), std::move(equation), std::move(field),
                              std::move(lift), residual, threshold);
    e.verdict = Verdict::Reported;
    return e;
}

bool all_pass(const CheckReport& r) { return count_problems(r) == 0; }

size_t count_problems(const CheckReport& r) {
    size_t n = 0;
    for (const auto& e : r.entries)
        if (e.verdict == Verdict::Fail) ++n;
    for (const auto& a : r.audits)
        if (a.verdict != "consistent") ++n;
    return n;
}

namespace {

ordered_json audit_to_json(const TheoremAudit& a) {
    ordered_json j;
    j["id"] = a.id;
    j["field"] = a.field;
    j["lift"] = a.lift;
    j["base_killing"] = a.base_killing;
    j["base_killing_residual"] = a.base_killing_res;
    j["base_parallel"] = a.base_parallel;
    j["base_parallel_residual"] = a.base_parallel_res;
    j["base_second_zero"] = a.base_second_zero;
    j["base_second_residual"] = a.base_second_res;
    j["hypothesis"] = a.hypothesis;
    j["conclusion"] = a.conclusion;
    j["conclusion_residual"] = a.conclusion_res;
    j["two_engine_deviation"] = a.two_engine_dev;
    j["threshold"] = a.threshold;
    j["verdict"] = a.verdict;
    j["witness_x"] = a.witness_x;
    j["witness_y"] = a.witness_y;
    return j;
}

ordered_json report_to_json_obj(const CheckReport& r) {
    ordered_json j;
    j["tool_version"] = r.tool_version;
    j["spec"] = r.spec_name;
    j["seed"] = r.seed;
    j["points"] = r.points;
    j["entries"] = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json je;
        je["check"] = e.id;
        je["equation"] = e.equation;
        je["field"] = e.field;
        je["lift"] = e.lift;
        je["max_abs_residual"] = e.max_abs_residual;
        je["tolerance"] = e.tolerance;
        je["verdict"] = verdict_name(e.verdict);
        j["entries"].push_back(std::move(je));
    }
    j["theorem_audits"] = ordered_json::array();
    for (const auto& a : r.audits) j["theorem_audits"].push_back(audit_to_json(a));
    return j;
}

}  // namespace

std::string report_to_json(const CheckReport& r) {
    return report_to_json_obj(r).dump(2) + "\n";
}

std::string reports_to_json(const std::vector<CheckReport>& rs, uint64_t seed,
                            size_t points) {
    ordered_json j;
    j["tool_version"] = kToolVersion;
    j["seed"] = seed;
    j["points"] = points;
    j["reports"] = ordered_json::array();
    for (const auto& r : rs) j["reports"].push_back(report_to_json_obj(r));
    return j.dump(2) + "\n";
}

std::string render_report(const CheckReport& r) {
    std::ostringstream os;
    os << "spec: " << r.spec_name << "   seed: " << r.seed
       << "   points: " << r.points << "\n";

    size_t id_w = 5, fl_w = 7;  // at least as wide as the column headers
    for (const auto& e : r.entries) {
        id_w = std::max(id_w, e.id.size());
        fl_w = std::max(fl_w, e.field.size() + e.lift.size() + 1);
    }
    os << std::left << std::setw(5) << "eq" << std::setw(static_cast<int>(id_w + 2))
       << "check" << std::setw(static_cast<int>(fl_w + 2)) << "subject"
       << std::setw(13) << "residual" << std::setw(13) << "tolerance"
       << "verdict\n";
    for (const auto& e : r.entries) {
        std::string subject = e.field;
        if (!e.lift.empty()) subject += (subject.empty() ? "" : "/") + e.lift;
        std::ostringstream res, tol;
        res << std::scientific << std::setprecision(3) << e.max_abs_residual;
        tol << std::scientific << std::setprecision(2) << e.tolerance;
        os << std::left << std::setw(5) << e.equation
           << std::setw(static_cast<int>(id_w + 2)) << e.id
           << std::setw(static_cast<int>(fl_w + 2)) << subject << std::setw(13)
           << res.str() << std::setw(13) << tol.str()
           << (e.verdict == Verdict::Fail ? "FAIL" : verdict_name(e.verdict))
           << "\n";
    }

    if (!r.audits.empty()) {
        os << "theorem audits:\n";
        for (const auto& a : r.audits) {
            os << "  " << a.id << " (" << a.field << "/" << a.lift
               << "): hypothesis "
               << (a.hypothesis ? "holds" : "fails") << " [killing "
               << (a.base_killing ? "yes" : "no") << ", parallel "
               << (a.base_parallel ? "yes" : "no") << ", second-order zero "
               << (a.base_second_zero ? "yes" : "no") << "], conclusion "
               << (a.conclusion ? "holds" : "fails") << " (residual "
               << std::scientific << std::setprecision(3) << a.conclusion_res
               << ", engines agree to " << a.two_engine_dev << ") -> " << a.verdict
               << "\n";
            if (a.verdict != "consistent") {
                os << "      witness x = (";
                for (size_t i = 0; i < a.witness_x.size(); ++i)
                    os << (i ? ", " : "") << std::defaultfloat
                       << std::setprecision(10) << a.witness_x[i];
                os << "), y = (";
                for (size_t i = 0; i < a.witness_y.size(); ++i)
                    os << (i ? ", " : "") << a.witness_y[i];
                os << ")\n";
            }
        }
    }
    return os.str();
}

}  // namespace liftcheck
