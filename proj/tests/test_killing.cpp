#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "liftcheck/bundle.hpp"
#include "liftcheck/killing.hpp"
#include "liftcheck/manifold.hpp"
#include "liftcheck/oracle.hpp"
#include "liftcheck/sampler.hpp"
#include "liftcheck/specfile.hpp"

using namespace liftcheck;

namespace {

const char* kCartesianChart = R"(
[manifold]
name = flat
dim = 2
coords = x1, x2
[metric]
g[0][0] = "1"
g[1][1] = "1"
[domain]
x1 = -2, 2
x2 = -2, 2
fiber = -1, 1
[vectorfield.translation]
X[0] = "1"
X[1] = "0"
[vectorfield.rotation]
X[0] = "-x2"
X[1] = "x1"
[vectorfield.dilation]
X[0] = "x1"
X[1] = "x2"
[vectorfield.gradient]
X[0] = "x2"
X[1] = "x1"
)";

const char* kSphereChart = R"(
[manifold]
name = sphere
dim = 2
coords = theta, phi
[metric]
g[0][0] = "1"
g[1][1] = "sin(theta)^2"
[domain]
theta = 0.4, 2.7
phi = -3, 3
fiber = -1, 1
[vectorfield.dphi]
X[0] = "0"
X[1] = "1"
[vectorfield.wobble]
X[0] = "sin(phi)*theta"
X[1] = "cos(theta) + phi^2/9"
)";

const char* kHyperbolicChart = R"(
[manifold]
name = hyperbolic
dim = 2
coords = r, phi
[metric]
g[0][0] = "1"
g[1][1] = "sinh(r)^2"
[domain]
r = 0.3, 2.5
phi = -3, 3
fiber = -1, 1
[vectorfield.dphi]
X[0] = "0"
X[1] = "1"
)";

Manifold make(const char* text) { return Manifold(parse_spec_text(text, "inline")); }

constexpr LiftKind kKinds[] = {LiftKind::Vertical, LiftKind::Complete,
                               LiftKind::Horizontal};

double block_dev(const Block2Tensor& a, const Block2Tensor& b) {
    return max_abs(a.full() - b.full());
}

const TheoremAudit& find_audit(const Classification& c, const std::string& id) {
    for (const auto& a : c.audits)
        if (a.id == id) return a;
    throw std::runtime_error("no audit " + id);
}

}  // namespace

TEST_CASE("ingredient tables: contractions and transposes are coherent") {
    Manifold m = make(kSphereChart);
    for (const auto& q : sample_bundle_points(m.spec(), 20, 3)) {
        for (const char* f : {"dphi", "wobble"}) {
            LiftIngredients in = lift_ingredients(m, f, q);
            const size_t n = in.n;
            Mat g = m.metric_at(q.x);
            for (size_t i = 0; i < n; ++i) {
                double nx = 0.0, nxl = 0.0;
                for (size_t l = 0; l < n; ++l) {
                    nx += in.y[l] * in.S_up(l, i);
                    nxl += in.y[l] * in.S_low(l, i);
                }
                CHECK(in.nX_up[i] == doctest::Approx(nx).epsilon(1e-13));
                CHECK(in.nX_low[i] == doctest::Approx(nxl).epsilon(1e-13));
                for (size_t j = 0; j < n; ++j) {
                    double a2y = 0.0;
                    for (size_t l = 0; l < n; ++l) a2y += in.y[l] * in.A2_up(i, l, j);
                    CHECK(in.A2y_up(i, j) == doctest::Approx(a2y).epsilon(1e-13));
                    CHECK(in.Q(i, j) == in.P(j, i));
                    CHECK(in.QD(i, j) == in.PD(j, i));
                    double low = 0.0;
                    for (size_t h = 0; h < n; ++h) low += g(j, h) * in.A2y_up(i, h);
                    CHECK(in.A2y_low(i, j) == doctest::Approx(low).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("specialized covariant-derivative blocks match the frame assembly") {
    for (const char* text : {kCartesianChart, kSphereChart, kHyperbolicChart}) {
        Manifold m = make(text);
        GenericDerivativeEngine eng(m);
        for (const auto& q : sample_bundle_points(m.spec(), 25, 5))
            for (const auto& fv : m.spec().vector_fields)
                for (LiftKind k : kKinds) {
                    Block2Tensor spec = cov_deriv_lift(m, fv.first, k, q);
                    Block2Tensor gen = eng.vector_assembly(fv.first, k, q);
                    CHECK(block_dev(spec, gen) <= 1e-10 * (1.0 + gen.max_abs()));
                }
    }
}

TEST_CASE("rotation and Lie blocks are the split of the covector assembly") {
    for (const char* text : {kSphereChart, kHyperbolicChart}) {
        Manifold m = make(text);
        GenericDerivativeEngine eng(m);
        for (const auto& q : sample_bundle_points(m.spec(), 25, 7))
            for (const auto& fv : m.spec().vector_fields)
                for (LiftKind k : kKinds) {
                    Block2Tensor rot = rotation_lift(m, fv.first, k, q);
                    Block2Tensor lie = lie_derivative_lift(m, fv.first, k, q);
                    Block2Tensor gen = eng.covector_assembly(fv.first, k, q);
                    double scale = 1.0 + gen.max_abs();

                    // rot + lie reassembles twice the unsymmetrized derivative
                    Mat twice = block_add(rot, lie).full();
                    CHECK(max_abs(twice - 2.0 * gen.full()) <= 1e-10 * scale);

                    // and each half has the right symmetry across block transpose
                    CHECK(block_add(rot, block_transpose(rot)).max_abs() <= 1e-12 * scale);
                    CHECK(block_sub(lie, block_transpose(lie)).max_abs() <= 1e-12 * scale);
                }
    }
}

TEST_CASE("lift derivatives agree with the coordinate oracle on every chart") {
    for (const char* text : {kCartesianChart, kSphereChart, kHyperbolicChart}) {
        Manifold m = make(text);
        Oracle o(m);
        for (const auto& q : sample_bundle_points(m.spec(), 15, 11))
            for (const auto& fv : m.spec().vector_fields)
                for (LiftKind k : kKinds) {
                    Block2Tensor cd = cov_deriv_lift(m, fv.first, k, q);
                    Block2Tensor cd_o =
                        o.to_adapted_mixed(q, o.cov_deriv_induced(fv.first, k, q));
                    CHECK(block_dev(cd, cd_o) <= 1e-8 * (1.0 + cd_o.max_abs()));

                    Block2Tensor lie = lie_derivative_lift(m, fv.first, k, q);
                    Block2Tensor lie_o =
                        o.to_adapted_cov2(q, o.lie_derivative_induced(fv.first, k, q));
                    CHECK(block_dev(lie, lie_o) <= 1e-8 * (1.0 + lie_o.max_abs()));
                }
    }
}

TEST_CASE("second-derivative exchange: two identities vanish, one does not") {
    Manifold ms = make(kSphereChart);
    Manifold mh = make(kHyperbolicChart);
    double circ_s = 0.0, circ_h = 0.0;
    for (const auto& q : sample_bundle_points(ms.spec(), 30, 13)) {
        KillingIdentityResiduals r =
            killing_identity_residuals(lift_ingredients(ms, "dphi", q));
        CHECK(r.single_term <= 1e-10);
        CHECK(r.symmetrized <= 1e-10);
        circ_s = std::max(circ_s, r.circulated);
    }
    for (const auto& q : sample_bundle_points(mh.spec(), 30, 13)) {
        KillingIdentityResiduals r =
            killing_identity_residuals(lift_ingredients(mh, "dphi", q));
        CHECK(r.single_term <= 1e-10);
        CHECK(r.symmetrized <= 1e-10);
        circ_h = std::max(circ_h, r.circulated);
    }
    // the circulated variant picks up 2(P + Q) and stays order-one on
    // curved charts
    CHECK(circ_s >= 0.1);
    CHECK(circ_h >= 0.1);

    // on a flat chart all three collapse to the same vanishing statement
    Manifold mf = make(kCartesianChart);
    for (const auto& q : sample_bundle_points(mf.spec(), 10, 13)) {
        KillingIdentityResiduals r =
            killing_identity_residuals(lift_ingredients(mf, "rotation", q));
        CHECK(r.circulated <= 1e-12);
        CHECK(r.single_term <= 1e-12);
        CHECK(r.symmetrized <= 1e-12);
    }
}

TEST_CASE("unsymmetrized complete upper-left block differs by the curvature terms") {
    Manifold m = make(kSphereChart);
    double gap = 0.0;
    for (const auto& q : sample_bundle_points(m.spec(), 15, 17)) {
        LiftIngredients in = lift_ingredients(m, "dphi", q);
        Mat single = lie_complete_upper_left_unsymmetrized(in);
        Mat true_block = lie_derivative_lift(m, "dphi", LiftKind::Complete, q).uu;
        // the two versions differ by transposed-derivative and curvature terms
        Mat want = transpose(in.A2y_low) - 2.0 * (in.P + in.Q);
        CHECK(max_abs((true_block - single) - want) <= 1e-10 * (1.0 + max_abs(want)));
        gap = std::max(gap, max_abs(true_block - single));
    }
    // curvature keeps the two versions genuinely apart on this chart
    CHECK(gap >= 0.1);
}

TEST_CASE("classification: flat translation is consistent everywhere") {
    Manifold m = make(kCartesianChart);
    Oracle o(m);
    auto samples = sample_bundle_points(m.spec(), 40, 19);
    Classification c = classify_field(m, o, "translation", samples);
    CHECK(c.base_killing);
    CHECK(c.base_parallel);
    CHECK(c.base_second_zero);
    CHECK(c.base_closed);
    for (const auto& a : c.audits) {
        CHECK(a.verdict == "consistent");
        CHECK(a.hypothesis);
        CHECK(a.conclusion);
    }
    for (const auto& l : c.lifts) {
        CHECK(l.cov_deriv_max <= c.threshold);
        CHECK(l.lie_max <= c.threshold);
    }
}

TEST_CASE("classification: flat rotation refutes both claimed directions") {
    Manifold m = make(kCartesianChart);
    Oracle o(m);
    auto samples = sample_bundle_points(m.spec(), 40, 23);
    Classification c = classify_field(m, o, "rotation", samples);
    CHECK(c.base_killing);
    CHECK_FALSE(c.base_parallel);
    CHECK(c.base_second_zero);

    const TheoremAudit& t2a = find_audit(c, "T2a");
    CHECK_FALSE(t2a.hypothesis);  // not parallel
    CHECK(t2a.conclusion);        // complete lift measured Killing anyway
    CHECK(t2a.verdict == "counterexample-candidate");
    CHECK(t2a.two_engine_dev <= 1e-8);

    const TheoremAudit& t2b = find_audit(c, "T2b");
    CHECK(t2b.hypothesis);        // Killing with vanishing second derivative
    CHECK_FALSE(t2b.conclusion);  // horizontal lift fails to be Killing
    CHECK(t2b.verdict == "counterexample-candidate");
    CHECK(t2b.conclusion_res == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t2b.two_engine_dev <= 1e-8);
    CHECK(t2b.witness_x.size() == 2);
}

TEST_CASE("classification: dilation and gradient raise no audit flags") {
    Manifold m = make(kCartesianChart);
    Oracle o(m);
    auto samples = sample_bundle_points(m.spec(), 40, 29);
    for (const char* f : {"dilation", "gradient"}) {
        Classification c = classify_field(m, o, f, samples);
        CHECK_FALSE(c.base_killing);
        for (const auto& a : c.audits) {
            CHECK_FALSE(a.hypothesis);
            CHECK(a.verdict == "consistent");
        }
    }
    Classification cd = classify_field(m, o, "dilation", samples);
    CHECK(cd.base_closed);  // dilation's covector is exact
}

TEST_CASE("classification: curved-chart isometry generators flag only T2a") {
    for (const char* text : {kSphereChart, kHyperbolicChart}) {
        Manifold m = make(text);
        Oracle o(m);
        auto samples = sample_bundle_points(m.spec(), 40, 31);
        Classification c = classify_field(m, o, "dphi", samples);
        CHECK(c.base_killing);
        CHECK_FALSE(c.base_parallel);
        CHECK_FALSE(c.base_second_zero);
        CHECK(c.identity.single_term <= c.threshold);
        CHECK(c.identity.symmetrized <= c.threshold);
        CHECK(c.identity.circulated > 100 * c.threshold);

        const TheoremAudit& t2a = find_audit(c, "T2a");
        CHECK(t2a.verdict == "counterexample-candidate");
        const TheoremAudit& t2b = find_audit(c, "T2b");
        CHECK(t2b.verdict == "consistent");  // hypothesis already fails here
        for (const auto& a : c.audits)
            if (a.id == "T1") CHECK(a.verdict == "consistent");
    }
}

TEST_CASE("closedness: gradient field closes, rotation does not") {
    Manifold m = make(kCartesianChart);
    auto samples = sample_bundle_points(m.spec(), 40, 37);

    ClosednessReport g = closedness_check(m, "gradient", samples);
    CHECK(g.conditions_hold);
    CHECK(g.closed_on_samples);
    CHECK(g.implication_consistent);
    CHECK(g.antisym_residual <= g.threshold);
    CHECK(g.rotation_max <= g.threshold);

    ClosednessReport r = closedness_check(m, "rotation", samples);
    CHECK_FALSE(r.conditions_hold);
    CHECK_FALSE(r.closed_on_samples);
    CHECK(r.implication_consistent);
    CHECK(r.antisym_residual == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.rotation_max == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("closedness: curved isometry generator is not closed") {
    Manifold m = make(kSphereChart);
    auto samples = sample_bundle_points(m.spec(), 40, 41);
    ClosednessReport c = closedness_check(m, "dphi", samples);
    CHECK_FALSE(c.conditions_hold);
    CHECK_FALSE(c.closed_on_samples);
    CHECK(c.implication_consistent);
    CHECK(c.antisym_residual >= 0.5);
}
