// Acceptance gate: one line per criterion, exit code = number of failures.
// Each criterion is asserted at its stated tolerance against the shipped
// chart catalog; measured magnitudes are printed so a failure documents
// itself. Criteria 5b and 7a encode claims the measurements refute; they
// are asserted as stated and expected to stay red with both engines in
// agreement (see the classification audits for the machine-checked side).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "liftcheck/bundle.hpp"
#include "liftcheck/cli.hpp"
#include "liftcheck/killing.hpp"
#include "liftcheck/manifold.hpp"
#include "liftcheck/oracle.hpp"
#include "liftcheck/sampler.hpp"
#include "liftcheck/specfile.hpp"

using namespace liftcheck;

namespace {

constexpr LiftKind kKinds[] = {LiftKind::Vertical, LiftKind::Complete,
                               LiftKind::Horizontal};

struct Criterion {
    std::string label;
    bool pass;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

struct Chart {
    std::string name;
    Manifold manifold;
    Oracle oracle;
    explicit Chart(ManifoldSpec s)
        : name(s.name), manifold(std::move(s)), oracle(manifold) {}
};

double conn_dev(const BundleConnection& a, const BundleConnection& b) {
    double d = 0.0;
    for (int u = 0; u < 2; ++u)
        for (int g = 0; g < 2; ++g)
            for (int l = 0; l < 2; ++l)
                for (size_t i = 0; i < a.coeff[u][g][l].data().size(); ++i)
                    d = std::max(d, std::abs(a.coeff[u][g][l].data()[i] -
                                             b.coeff[u][g][l].data()[i]));
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string catalog = argc > 1 ? argv[1] : "catalog";

    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(catalog))
        if (e.path().extension() == ".spec") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    if (paths.size() != 5) {
        std::cerr << "expected 5 charts under " << catalog << ", found "
                  << paths.size() << "\n";
        return 99;
    }

    std::vector<Chart> charts;
    charts.reserve(paths.size());
    for (const auto& p : paths) charts.emplace_back(load_spec_file(p.string()));
    auto chart = [&](const std::string& name) -> Chart& {
        for (auto& c : charts)
            if (c.name == name) return c;
        throw std::runtime_error("catalog chart missing: " + name);
    };

    std::vector<Criterion> out;

    // 1: every adapted connection block against the coordinate oracle, and
    //    the four zero arrays (both builders) staying numerically zero
    {
        double dev = 0.0, zeros = 0.0;
        for (auto& c : charts)
            for (const auto& q : sample_bundle_points(c.manifold.spec(), 20, 0)) {
                BundleConnection direct = bundle_connection_at(c.manifold, q);
                BundleConnection changed =
                    c.oracle.connection_to_adapted(q, c.oracle.levi_civita_induced(q));
                dev = std::max(dev, conn_dev(direct, changed));
                for (int u = 0; u < 2; ++u) {
                    zeros = std::max(zeros, max_abs(direct.coeff[u][1][1]));
                    zeros = std::max(zeros, max_abs(changed.coeff[u][1][1]));
                }
            }
        out.push_back({"1  connection blocks match coordinate oracle",
                       dev <= 1e-8 && zeros <= 1e-10,
                       "dev " + sci(dev) + " (tol 1e-8), zero patterns " +
                           sci(zeros) + " (tol 1e-10)"});
    }

    // 2: metric Lie derivative, specialized blocks vs connection-free
    //    coordinate computation carried into the adapted frame
    {
        double dev = 0.0;
        for (auto& c : charts)
            for (const auto& q : sample_bundle_points(c.manifold.spec(), 50, 0))
                for (const auto& fv : c.manifold.spec().vector_fields)
                    for (LiftKind k : kKinds) {
                        Mat a = lie_derivative_lift(c.manifold, fv.first, k, q).full();
                        Mat b = c.oracle
                                    .to_adapted_cov2(q, c.oracle.lie_derivative_induced(
                                                            fv.first, k, q))
                                    .full();
                        dev = std::max(dev, max_abs(a - b));
                    }
        out.push_back({"2  Lie-derivative two-engine agreement", dev <= 1e-8,
                       "dev " + sci(dev) + " (tol 1e-8)"});
    }

    // 3: specialized covariant-derivative blocks vs the generic frame assembly
    {
        double dev = 0.0;
        for (auto& c : charts) {
            GenericDerivativeEngine eng(c.manifold);
            for (const auto& q : sample_bundle_points(c.manifold.spec(), 50, 0))
                for (const auto& fv : c.manifold.spec().vector_fields)
                    for (LiftKind k : kKinds) {
                        Mat a = cov_deriv_lift(c.manifold, fv.first, k, q).full();
                        Mat b = eng.vector_assembly(fv.first, k, q).full();
                        dev = std::max(dev, max_abs(a - b));
                    }
        }
        out.push_back({"3  covariant-derivative assembly agreement", dev <= 1e-10,
                       "dev " + sci(dev) + " (tol 1e-10)"});
    }

    // shared sweep helper for the per-field criteria
    auto lift_max = [](Chart& c, const std::string& field, LiftKind k, size_t n,
                       bool lie) {
        double m = 0.0;
        for (const auto& q : sample_bundle_points(c.manifold.spec(), n, 0)) {
            Block2Tensor t = lie ? lie_derivative_lift(c.manifold, field, k, q)
                                 : cov_deriv_lift(c.manifold, field, k, q);
            m = std::max(m, t.max_abs());
        }
        return m;
    };

    // 4: parallel lifts exactly for the parallel base field
    {
        Chart& flat = chart("flat_cartesian");
        Chart& sphere = chart("sphere");
        double parallel_dev = 0.0, nonparallel_min = 1e300;
        for (LiftKind k : kKinds) {
            parallel_dev =
                std::max(parallel_dev, lift_max(flat, "translation", k, 50, false));
            nonparallel_min =
                std::min(nonparallel_min, lift_max(flat, "rotation", k, 50, false));
            nonparallel_min =
                std::min(nonparallel_min, lift_max(sphere, "dphi", k, 50, false));
        }
        out.push_back({"4  lift parallelism tracks the base field",
                       parallel_dev <= 1e-10 && nonparallel_min > 1e-3,
                       "parallel dev " + sci(parallel_dev) +
                           " (tol 1e-10), smallest non-parallel max " +
                           sci(nonparallel_min) + " (must exceed 1e-3)"});
    }

    // 5a: every lift of a parallel isometry generator stays an isometry
    {
        Chart& flat = chart("flat_cartesian");
        double dev = 0.0;
        for (LiftKind k : kKinds)
            dev = std::max(dev, lift_max(flat, "translation", k, 50, true));
        out.push_back({"5a translation lifts are isometry generators", dev <= 1e-10,
                       "dev " + sci(dev) + " (tol 1e-10)"});
    }

    // 5b: claimed for the horizontal lift of the flat rotation field (its
    //     second covariant derivative vanishes); the measurement refutes it
    {
        Chart& flat = chart("flat_cartesian");
        double dev = lift_max(flat, "rotation", LiftKind::Horizontal, 50, true);
        out.push_back({"5b flat rotation horizontal lift is an isometry generator",
                       dev <= 1e-10,
                       "dev " + sci(dev) +
                           " (tol 1e-10); both engines agree on the nonzero value"});
    }

    // 5c: the complete-lift status is whatever both engines agree on; assert
    //     only the agreement and surface the recorded audit verdict
    {
        Chart& flat = chart("flat_cartesian");
        auto samples = sample_bundle_points(flat.manifold.spec(), 50, 0);
        Classification cls =
            classify_field(flat.manifold, flat.oracle, "rotation", samples);
        double dev = 0.0;
        std::string verdict = "missing";
        for (const auto& l : cls.lifts)
            if (l.kind == LiftKind::Complete) dev = l.lie_two_engine_dev;
        for (const auto& a : cls.audits)
            if (a.id == "T2a") verdict = a.verdict;
        out.push_back({"5c flat rotation complete lift: engines agree on its status",
                       dev <= 1e-8,
                       "engine dev " + sci(dev) + " (tol 1e-8), audit verdict: " +
                           verdict});
    }

    // 5d: curvature keeps the horizontal lift of the round isometry generator
    //     from being one: the upper-left block is visibly nonzero
    {
        Chart& sphere = chart("sphere");
        double block = 0.0;
        for (const auto& q : sample_bundle_points(sphere.manifold.spec(), 50, 0))
            block = std::max(
                block,
                max_abs(lie_derivative_lift(sphere.manifold, "dphi",
                                            LiftKind::Horizontal, q)
                            .uu));
        out.push_back({"5d curved horizontal lift: upper-left block is nonzero",
                       block > 1e-3, "max " + sci(block) + " (must exceed 1e-3)"});
    }

    // 6: closed covector fields keep closed complete lifts; the rotation
    //    field's covector is the non-closed control
    {
        Chart& flat = chart("flat_cartesian");
        auto samples = sample_bundle_points(flat.manifold.spec(), 50, 0);
        double rot_blocks = 0.0, conds = 0.0;
        for (const char* f : {"dilation", "gradient"}) {
            ClosednessReport cr = closedness_check(flat.manifold, f, samples);
            rot_blocks = std::max(rot_blocks, cr.rotation_max);
            conds = std::max({conds, cr.antisym_residual, cr.second_residual});
        }
        ClosednessReport control = closedness_check(flat.manifold, "rotation", samples);
        out.push_back(
            {"6  closedness transfers to the complete lift",
             rot_blocks <= 1e-10 && conds <= 1e-12 && control.antisym_residual >= 1.0,
             "closed-field blocks " + sci(rot_blocks) +
                 " (tol 1e-10), base conditions " + sci(conds) +
                 " (tol 1e-12), control residual " + sci(control.antisym_residual) +
                 " (must reach 1)"});
    }

    // 7a: the printed y-contracted exchange identity for base isometry
    //     generators; curvature charts refute the printed sign arrangement
    // 7b: the transposed arrangement and its symmetrized consequence hold
    {
        double printed = 0.0, corrected = 0.0;
        std::vector<std::string> fields_used;
        for (auto& c : charts)
            for (const auto& fv : c.manifold.spec().vector_fields) {
                bool killing = true;
                auto samples = sample_bundle_points(c.manifold.spec(), 50, 0);
                for (const auto& q : samples)
                    killing = killing &&
                              max_abs(c.manifold.killing_residual_base(fv.first, q.x)) <=
                                  1e-9;
                if (!killing) continue;
                fields_used.push_back(c.name + "/" + fv.first);
                for (const auto& q : samples) {
                    KillingIdentityResiduals r = killing_identity_residuals(
                        lift_ingredients(c.manifold, fv.first, q));
                    printed = std::max(printed, r.circulated);
                    corrected = std::max({corrected, r.single_term, r.symmetrized});
                }
            }
        std::string span = fields_used.empty()
                               ? std::string("none")
                               : fields_used.front() + " .. " + fields_used.back();
        out.push_back({"7a second-derivative exchange identity as printed",
                       printed <= 1e-8,
                       "dev " + sci(printed) + " (tol 1e-8) over " +
                           std::to_string(fields_used.size()) +
                           " base isometry generators [" + span + "]"});
        out.push_back({"7b second-derivative exchange identity, transposed form",
                       corrected <= 1e-8, "dev " + sci(corrected) + " (tol 1e-8)"});
    }

    // 8: central differences converge at second order against the symbolic
    //    tables (a vanishing truncation term satisfies the bound outright)
    {
        bool ok = true;
        std::ostringstream detail;
        for (const char* name : {"sphere", "flat_polar"}) {
            Chart& c = chart(name);
            BundlePoint probe;
            for (const auto& iv : c.manifold.spec().domain)
                probe.x.push_back(0.5 * (iv.lo + iv.hi));
            probe.y.assign(c.manifold.dim(), 0.25);
            for (const char* qty : {"christoffel", "riemann"}) {
                double coarse = c.oracle.finite_difference_audit(qty, probe, 2e-4);
                double fine = c.oracle.finite_difference_audit(qty, probe, 1e-4);
                bool second_order = fine > 0.0 && coarse / fine >= 2.8 &&
                                    coarse / fine <= 5.2;
                bool exact = coarse <= 1e-11 && fine <= 1e-11;
                ok = ok && (second_order || exact);
                detail << name << "/" << qty << " "
                       << (exact ? std::string("exact") : "ratio " + sci(coarse / fine))
                       << "; ";
            }
        }
        out.push_back({"8  finite-difference audit converges at second order", ok,
                       detail.str() + "(ratio 4 +/- 30% or exact)"});
    }

    // 9: the full catalog run is byte-reproducible
    {
        auto tmp1 = std::filesystem::temp_directory_path() / "acceptance_run1.json";
        auto tmp2 = std::filesystem::temp_directory_path() / "acceptance_run2.json";
        std::ostringstream sink;
        run_cli({"verify-paper", catalog, "--seed", "3", "--json", tmp1.string()},
                sink, sink);
        run_cli({"verify-paper", catalog, "--seed", "3", "--json", tmp2.string()},
                sink, sink);
        std::ifstream f1(tmp1), f2(tmp2);
        std::stringstream s1, s2;
        s1 << f1.rdbuf();
        s2 << f2.rdbuf();
        bool same = !s1.str().empty() && s1.str() == s2.str();
        out.push_back({"9  repeated catalog runs are byte-identical", same,
                       std::to_string(s1.str().size()) + " bytes compared"});
        std::filesystem::remove(tmp1);
        std::filesystem::remove(tmp2);
    }

    size_t width = 0;
    for (const auto& c : out) width = std::max(width, c.label.size());
    int failures = 0;
    for (const auto& c : out) {
        failures += c.pass ? 0 : 1;
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.label
                  << std::string(width - c.label.size() + 2, ' ') << c.detail << "\n";
    }
    std::cout << (failures == 0 ? "all criteria hold"
                                : std::to_string(failures) + " criteria fail")
              << " (" << out.size() << " total)\n";
    return failures;
}
