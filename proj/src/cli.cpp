#include "liftcheck/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "liftcheck/checks.hpp"
#include "liftcheck/specfile.hpp"

namespace liftcheck {

namespace {

struct CommonArgs {
    std::string spec_path;
    std::string field;
    size_t points = 50;
    uint64_t seed = 0;
    double tol = -1.0;
    std::string json_path;
    bool serial = false;

    CheckOptions options() const {
        CheckOptions o;
        o.points = points;
        o.seed = seed;
        o.tol_override = tol;
        o.mode = serial ? SweepMode::Serial : SweepMode::Parallel;
        return o;
    }
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_field) {
    cmd->add_option("spec", a.spec_path, "manifold spec file")->required();
    if (with_field)
        cmd->add_option("--field", a.field, "vector field name")->required();
    cmd->add_option("--points", a.points, "sample point count");
    cmd->add_option("--seed", a.seed, "sampler seed");
    cmd->add_option("--tol", a.tol, "override per-check tolerances");
    cmd->add_option("--json", a.json_path, "write the machine-readable report here");
    cmd->add_flag("--serial", a.serial, "use the serial reference sweep");
}

int write_json(const std::string& path, const std::string& body, std::ostream& err) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        err << "error: cannot write '" << path << "'\n";
        return 2;
    }
    out << body;
    return 0;
}

int finish(const CheckReport& rep, const CommonArgs& a, std::ostream& out,
           std::ostream& err) {
    out << render_report(rep);
    if (!a.json_path.empty()) {
        int rc = write_json(a.json_path, report_to_json(rep), err);
        if (rc != 0) return rc;
    }
    return all_pass(rep) ? 0 : 1;
}

void require_field(const Manifold& m, const std::string& field) {
    if (!m.spec().find_vector_field(field))
        throw SpecFileError("unknown vector field '" + field + "' (spec declares: " +
                            [&] {
                                std::string s;
                                for (const auto& [n, e] : m.spec().vector_fields) {
                                    (void)e;
                                    if (!s.empty()) s += ", ";
                                    s += n;
                                }
                                return s.empty() ? std::string("none") : s;
                            }() +
                            ")");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"tangent-bundle lift checker"};
    app.require_subcommand(1);

    CommonArgs vc, cf, cc, vp;
    CLI::App* cmd_vc = app.add_subcommand(
        "verify-connection",
        "check the adapted-frame connection against the induced-coordinate rebuild");
    add_common(cmd_vc, vc, false);

    CLI::App* cmd_cf = app.add_subcommand(
        "classify", "measure every lift equation and audit the structure theorems");
    add_common(cmd_cf, cf, true);

    CLI::App* cmd_cc = app.add_subcommand(
        "check-closed",
        "test closedness of the complete lift of the associated covector");
    add_common(cmd_cc, cc, true);

    CLI::App* cmd_vp = app.add_subcommand(
        "verify-paper", "run the full check suite over a catalog directory");
    cmd_vp->add_option("catalog", vp.spec_path, "directory of .spec files")
        ->required();
    cmd_vp->add_option("--points", vp.points, "sample point count");
    cmd_vp->add_option("--seed", vp.seed, "sampler seed");
    cmd_vp->add_option("--tol", vp.tol, "override per-check tolerances");
    cmd_vp->add_option("--json", vp.json_path,
                       "write the machine-readable report here");
    cmd_vp->add_flag("--serial", vp.serial, "use the serial reference sweep");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_vc->parsed()) {
            Manifold m(load_spec_file(vc.spec_path));
            Oracle oracle(m);
            return finish(run_connection_checks(m, oracle, vc.options()), vc, out,
                          err);
        }
        if (cmd_cf->parsed()) {
            Manifold m(load_spec_file(cf.spec_path));
            require_field(m, cf.field);
            Oracle oracle(m);
            return finish(run_classify(m, oracle, cf.field, cf.options()), cf, out,
                          err);
        }
        if (cmd_cc->parsed()) {
            Manifold m(load_spec_file(cc.spec_path));
            require_field(m, cc.field);
            return finish(run_closedness(m, cc.field, cc.options()), cc, out, err);
        }
        if (cmd_vp->parsed()) {
            namespace fs = std::filesystem;
            if (!fs::is_directory(vp.spec_path)) {
                err << "error: '" << vp.spec_path << "' is not a directory\n";
                return 2;
            }
            std::vector<std::string> files;
            for (const auto& e : fs::directory_iterator(vp.spec_path))
                if (e.is_regular_file() && e.path().extension() == ".spec")
                    files.push_back(e.path().string());
            std::sort(files.begin(), files.end());
            if (files.empty()) {
                err << "error: no .spec files in '" << vp.spec_path << "'\n";
                return 2;
            }
            std::vector<CheckReport> reports;
            size_t problems = 0;
            for (const auto& f : files) {
                Manifold m(load_spec_file(f));
                Oracle oracle(m);
                CheckReport rep = run_spec_suite(m, oracle, vp.options());
                out << render_report(rep) << "\n";
                problems += count_problems(rep);
                reports.push_back(std::move(rep));
            }
            if (!vp.json_path.empty()) {
                int rc = write_json(vp.json_path,
                                    reports_to_json(reports, vp.seed, vp.points),
                                    err);
                if (rc != 0) return rc;
            }
            return problems == 0 ? 0 : 1;
        }
    } catch (const SpecFileError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace liftcheck
