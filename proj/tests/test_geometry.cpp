#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "liftcheck/expr.hpp"
#include "liftcheck/manifold.hpp"
#include "liftcheck/sampler.hpp"
#include "liftcheck/specfile.hpp"

using namespace liftcheck;

namespace {

const char* kPolarChart = R"(
[manifold]
name = polar
dim = 2
coords = r, phi
[metric]
g[0][0] = "1"
g[1][1] = "r^2"
[domain]
r = 0.5, 3
phi = -3, 3
fiber = -1, 1
[vectorfield.dphi]
X[0] = "0"
X[1] = "1"
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

Manifold make(const char* text) { return Manifold(parse_spec_text(text, "inline")); }

std::vector<Point> base_points(const Manifold& m, size_t count, uint64_t seed) {
    std::vector<Point> out;
    for (const auto& q : sample_bundle_points(m.spec(), count, seed))
        out.push_back(q.x);
    return out;
}

// d_k g_{ij} from the chart's own symbolic table
double metric_partial(const Manifold& m, size_t k, size_t i, size_t j,
                      const Point& x) {
    Expr d = bind_slots(diff(m.metric_exprs()[i][j], m.coords()[k]), m.coords());
    return eval(d, x);
}

}  // namespace

TEST_CASE("polar chart: frozen connection values and flatness") {
    Manifold m = make(kPolarChart);
    Point x = {2.0, 0.7};

    Tensor3 g = m.christoffel_at(x);
    CHECK(g(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-14));  // r phi phi
    CHECK(g(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));   // phi r phi
    CHECK(g(1, 1, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g(0, 0, 0) == 0.0);
    CHECK(g(0, 0, 1) == 0.0);
    CHECK(g(1, 1, 1) == 0.0);

    CHECK(m.metric_det_at(x) == doctest::Approx(4.0).epsilon(1e-14));

    for (const auto& p : base_points(m, 20, 11))
        CHECK(max_abs(m.riemann_at(p)) <= 1e-12);
}

TEST_CASE("sphere chart: frozen connection and curvature values") {
    Manifold m = make(kSphereChart);
    Point x = {std::acos(-1.0) / 4.0, 1.1};  // theta = pi/4

    Tensor3 g = m.christoffel_at(x);
    CHECK(g(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(g(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g(1, 1, 0) == doctest::Approx(1.0).epsilon(1e-14));

    Tensor4 rl = m.riemann_lowered_at(x);
    CHECK(rl(0, 1, 0, 1) == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(rl(0, 0, 1, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rl(1, 1, 0, 0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(rl(1, 0, 1, 0) == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(std::abs(rl(0, 1, 1, 0)) <= 1e-13);
    CHECK(std::abs(rl(1, 0, 0, 1)) <= 1e-13);
}

TEST_CASE("constant-curvature identity on sphere and hyperbolic charts") {
    struct Case {
        const char* text;
        double K;
    };
    for (const Case& c : {Case{kSphereChart, 1.0}, Case{kHyperbolicChart, -1.0}}) {
        Manifold m = make(c.text);
        const size_t n = m.dim();
        for (const auto& x : base_points(m, 20, 23)) {
            Mat g = m.metric_at(x);
            Tensor4 rl = m.riemann_lowered_at(x);
            double dev = 0.0, scale = max_abs(rl);
            for (size_t h = 0; h < n; ++h)
                for (size_t k = 0; k < n; ++k)
                    for (size_t j = 0; j < n; ++j)
                        for (size_t i = 0; i < n; ++i) {
                            double want = c.K * (g(h, k) * g(j, i) - g(h, j) * g(k, i));
                            dev = std::max(dev, std::abs(rl(h, k, j, i) - want));
                        }
            CHECK(dev <= 1e-10 * (1.0 + scale));
        }
    }
}

TEST_CASE("connection is metric compatible") {
    for (const char* text : {kSphereChart, kHyperbolicChart, kPolarChart}) {
        Manifold m = make(text);
        const size_t n = m.dim();
        for (const auto& x : base_points(m, 10, 37)) {
            Mat g = m.metric_at(x);
            Tensor3 gamma = m.christoffel_at(x);
            for (size_t k = 0; k < n; ++k)
                for (size_t i = 0; i < n; ++i)
                    for (size_t j = 0; j < n; ++j) {
                        double v = metric_partial(m, k, i, j, x);
                        for (size_t s = 0; s < n; ++s)
                            v -= gamma(s, k, i) * g(s, j) + gamma(s, k, j) * g(i, s);
                        CHECK(std::abs(v) <= 1e-10 * (1.0 + max_abs(g)));
                    }
        }
    }
}

TEST_CASE("curvature symmetries") {
    Manifold m = make(kSphereChart);
    const size_t n = m.dim();
    for (const auto& x : base_points(m, 10, 41)) {
        Tensor4 r = m.riemann_at(x);
        Tensor4 rl = m.riemann_lowered_at(x);
        double scale = 1.0 + max_abs(rl);
        for (size_t h = 0; h < n; ++h)
            for (size_t k = 0; k < n; ++k)
                for (size_t j = 0; j < n; ++j)
                    for (size_t i = 0; i < n; ++i) {
                        // antisymmetry in the derivative pair
                        CHECK(std::abs(r(h, k, j, i) + r(h, j, k, i)) <= 1e-12 * scale);
                        // first cyclic identity
                        CHECK(std::abs(r(h, k, j, i) + r(h, j, i, k) +
                                       r(h, i, k, j)) <= 1e-10 * scale);
                        // lowered: antisymmetric in the outer index pair,
                        // symmetric under exchanging (h,k) with (i,j)
                        CHECK(std::abs(rl(h, k, j, i) + rl(i, k, j, h)) <= 1e-10 * scale);
                        CHECK(std::abs(rl(h, k, j, i) - rl(j, i, h, k)) <= 1e-10 * scale);
                    }
    }
}

TEST_CASE("lowered curvature raises back through the inverse metric") {
    for (const char* text : {kSphereChart, kHyperbolicChart}) {
        Manifold m = make(text);
        const size_t n = m.dim();
        for (const auto& x : base_points(m, 10, 53)) {
            Mat ginv = m.inverse_metric_at(x);
            Tensor4 r = m.riemann_at(x);
            Tensor4 rl = m.riemann_lowered_at(x);
            double scale = 1.0 + max_abs(r);
            for (size_t h = 0; h < n; ++h)
                for (size_t k = 0; k < n; ++k)
                    for (size_t j = 0; j < n; ++j)
                        for (size_t i = 0; i < n; ++i) {
                            double v = 0.0;
                            for (size_t s = 0; s < n; ++s) v += ginv(h, s) * rl(s, k, j, i);
                            CHECK(std::abs(v - r(h, k, j, i)) <= 1e-12 * scale);
                        }
        }
    }
}

TEST_CASE("inverse metric agrees with numeric inversion") {
    Manifold m = make(kHyperbolicChart);
    for (const auto& x : base_points(m, 10, 61)) {
        Mat prod = m.metric_at(x) * m.inverse_metric_at(x);
        CHECK(max_abs(prod - Mat::identity(m.dim())) <= 1e-12);
        Mat num = lu_inverse(m.metric_at(x));
        CHECK(max_abs(num - m.inverse_metric_at(x)) <= 1e-12 * (1.0 + max_abs(num)));
    }
}

TEST_CASE("field derivative tables: first derivative assembly and lowering") {
    Manifold m = make(kSphereChart);
    const size_t n = m.dim();
    for (const auto& x : base_points(m, 10, 71)) {
        FieldDerivs fd = m.covariant_derivatives_at("wobble", x);
        Mat g = m.metric_at(x);
        Tensor3 gamma = m.christoffel_at(x);
        for (size_t i = 0; i < n; ++i)
            for (size_t h = 0; h < n; ++h) {
                double s = fd.partials(i, h);
                for (size_t mN = 0; mN < n; ++mN) s += gamma(h, i, mN) * fd.X_up[mN];
                CHECK(fd.S_up(i, h) == doctest::Approx(s).epsilon(1e-12));
                double low = 0.0;
                for (size_t mN = 0; mN < n; ++mN) low += g(h, mN) * fd.S_up(i, mN);
                CHECK(fd.S_low(i, h) == doctest::Approx(low).epsilon(1e-12));
            }
    }
}

TEST_CASE("second covariant derivative satisfies the commutator identity") {
    for (const char* text : {kSphereChart, kHyperbolicChart}) {
        Manifold m = make(text);
        const size_t n = m.dim();
        for (const auto& fv : m.spec().vector_fields) {
            for (const auto& x : base_points(m, 20, 83)) {
                FieldDerivs fd = m.covariant_derivatives_at(fv.first, x);
                Tensor4 r = m.riemann_at(x);
                double scale = 1.0 + max_abs(fd.A2_up) + max_abs(r);
                for (size_t k = 0; k < n; ++k)
                    for (size_t j = 0; j < n; ++j)
                        for (size_t h = 0; h < n; ++h) {
                            double comm = fd.A2_up(k, j, h) - fd.A2_up(j, k, h);
                            double curv = 0.0;
                            for (size_t s = 0; s < n; ++s)
                                curv += r(h, k, j, s) * fd.X_up[s];
                            CHECK(std::abs(comm - curv) <= 1e-9 * scale);
                        }
            }
        }
    }
}

TEST_CASE("flat-plane fields: frozen symmetrized derivative values") {
    Manifold m = make(kCartesianChart);
    Point x = {0.3, -1.2};

    CHECK(max_abs(m.killing_residual_base("translation", x)) <= 1e-14);
    CHECK(max_abs(m.killing_residual_base("rotation", x)) <= 1e-14);

    Mat dil = m.killing_residual_base("dilation", x);
    CHECK(dil(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(dil(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(dil(0, 1)) <= 1e-14);

    Mat grad = m.killing_residual_base("gradient", x);
    CHECK(grad(0, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(grad(1, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(grad(0, 0)) <= 1e-14);
}

TEST_CASE("rotational fields are Killing on curved charts") {
    for (const char* text : {kPolarChart, kSphereChart, kHyperbolicChart}) {
        Manifold m = make(text);
        for (const auto& x : base_points(m, 20, 97))
            CHECK(max_abs(m.killing_residual_base("dphi", x)) <= 1e-10);
    }
}
