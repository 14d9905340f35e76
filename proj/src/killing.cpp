#include "liftcheck/killing.hpp"

#include <algorithm>
#include <stdexcept>

namespace liftcheck {

namespace {

Mat zeros(size_t n) { return Mat(n, n); }

Block2Tensor make_block(Frame f, Variance v, Mat uu, Mat ub, Mat bu, Mat bb) {
    return Block2Tensor{f, v, std::move(uu), std::move(ub), std::move(bu),
                        std::move(bb)};
}

size_t argmax(const std::vector<double>& v) {
    size_t best = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

LiftIngredients lift_ingredients(const Manifold& m, const std::string& field,
                                 const BundlePoint& q) {
    const size_t n = m.dim();
    FieldDerivs d = m.covariant_derivatives_at(field, q.x);
    Tensor4 R = m.riemann_at(q.x);

    LiftIngredients in;
    in.n = n;
    in.y = q.y;
    in.X_up = d.X_up;
    in.X_low = d.X_low;
    in.S_up = d.S_up;
    in.S_low = d.S_low;
    in.A2_up = d.A2_up;
    in.A2_low = d.A2_low;

    in.nX_up.assign(n, 0.0);
    in.nX_low.assign(n, 0.0);
    for (size_t h = 0; h < n; ++h)
        for (size_t l = 0; l < n; ++l) {
            in.nX_up[h] += q.y[l] * d.S_up(l, h);
            in.nX_low[h] += q.y[l] * d.S_low(l, h);
        }

    in.A2y_up = Mat(n, n);
    in.A2y_low = Mat(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t h = 0; h < n; ++h)
            for (size_t l = 0; l < n; ++l) {
                in.A2y_up(i, h) += q.y[l] * d.A2_up(i, l, h);
                in.A2y_low(i, h) += q.y[l] * d.A2_low(i, l, h);
            }

    in.P = Mat(n, n);
    in.PD = Mat(n, n);
    in.C_mid = Mat(n, n);
    in.C_last = Mat(n, n);
    in.CD_mid = Mat(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t s = 0; s < n; ++s) {
                if (q.y[s] == 0.0) continue;
                for (size_t h = 0; h < n; ++h) {
                    double r_last = R(h, s, i, j);  // contracted index on the last slot
                    in.P(i, j) += q.y[s] * r_last * d.X_low[h];
                    in.PD(i, j) += q.y[s] * r_last * in.nX_low[h];
                }
            }
    for (size_t i = 0; i < n; ++i)
        for (size_t h = 0; h < n; ++h)
            for (size_t s = 0; s < n; ++s) {
                if (q.y[s] == 0.0) continue;
                for (size_t j = 0; j < n; ++j) {
                    in.C_mid(i, h) += q.y[s] * R(h, s, j, i) * d.X_up[j];
                    in.C_last(i, h) += q.y[s] * R(h, s, i, j) * d.X_up[j];
                    in.CD_mid(i, h) += q.y[s] * R(h, s, j, i) * in.nX_up[j];
                }
            }
    in.Q = transpose(in.P);
    in.QD = transpose(in.PD);
    return in;
}

Block2Tensor cov_deriv_lift(const Manifold& m, const std::string& field,
                            LiftKind kind, const BundlePoint& q) {
    LiftIngredients in = lift_ingredients(m, field, q);
    const size_t n = in.n;
    switch (kind) {
        case LiftKind::Vertical:
            return make_block(Frame::Adapted, Variance::Mixed,
                              -0.5 * in.C_mid, in.S_up + 0.5 * in.C_mid,
                              zeros(n), zeros(n));
        case LiftKind::Complete:
            return make_block(
                Frame::Adapted, Variance::Mixed,
                in.S_up - 0.5 * (in.C_mid + in.C_last) - 0.5 * in.CD_mid,
                in.A2y_up + in.C_last + 0.5 * in.CD_mid, -0.5 * in.C_last,
                in.S_up + 0.5 * in.C_last);
        case LiftKind::Horizontal:
            return make_block(Frame::Adapted, Variance::Mixed,
                              in.S_up - 0.5 * (in.C_mid + in.C_last), in.C_last,
                              -0.5 * in.C_last, 0.5 * in.C_last);
    }
    throw std::logic_error("unreachable lift kind");
}

Block2Tensor rotation_lift(const Manifold& m, const std::string& field,
                           LiftKind kind, const BundlePoint& q) {
    LiftIngredients in = lift_ingredients(m, field, q);
    const size_t n = in.n;
    const Mat& S = in.S_low;
    Mat St = transpose(S);
    switch (kind) {
        case LiftKind::Vertical:
            return make_block(Frame::Adapted, Variance::Covariant,
                              (S - St) + (in.Q - in.P), S, -1.0 * St, zeros(n));
        case LiftKind::Complete: {
            Mat A2yt = transpose(in.A2y_low);
            return make_block(Frame::Adapted, Variance::Covariant,
                              (in.A2y_low - A2yt) + (in.QD - in.PD) + (in.Q - in.P),
                              (S - St) + in.A2y_low, (S - St) - A2yt, S - St);
        }
        case LiftKind::Horizontal:
            return make_block(Frame::Adapted, Variance::Covariant, in.Q - in.P, S,
                              -1.0 * St, zeros(n));
    }
    throw std::logic_error("unreachable lift kind");
}

Block2Tensor lie_derivative_lift(const Manifold& m, const std::string& field,
                                 LiftKind kind, const BundlePoint& q) {
    LiftIngredients in = lift_ingredients(m, field, q);
    const size_t n = in.n;
    const Mat& S = in.S_low;
    Mat St = transpose(S);
    switch (kind) {
        case LiftKind::Vertical:
            return make_block(Frame::Adapted, Variance::Covariant, S + St, S, St,
                              zeros(n));
        case LiftKind::Complete: {
            Mat A2yt = transpose(in.A2y_low);
            return make_block(Frame::Adapted, Variance::Covariant,
                              (in.A2y_low + A2yt) - (in.P + in.Q),
                              (S + St) + in.A2y_low - in.Q,
                              (S + St) + A2yt - transpose(in.Q), S + St);
        }
        case LiftKind::Horizontal:
            return make_block(Frame::Adapted, Variance::Covariant,
                              -1.0 * (in.P + in.Q), S - in.Q,
                              St - transpose(in.Q), zeros(n));
    }
    throw std::logic_error("unreachable lift kind");
}

Mat lie_complete_upper_left_unsymmetrized(const LiftIngredients& in) {
    return in.A2y_low + in.P + in.Q;
}

KillingIdentityResiduals killing_identity_residuals(const LiftIngredients& in) {
    Mat A2yt = transpose(in.A2y_low);
    KillingIdentityResiduals r;
    r.circulated = max_abs(in.A2y_low + in.P + in.Q);
    r.single_term = max_abs(in.A2y_low - in.Q);
    r.symmetrized = max_abs((in.A2y_low + A2yt) - (in.P + in.Q));
    return r;
}

GenericDerivativeEngine::GenericDerivativeEngine(const Manifold& m)
    : m_(&m), n_(m.dim()) {
    const size_t n = n_;
    const auto& fiber = m.fiber_coords();
    const auto& bc = m.bundle_coords();
    const auto& g = m.metric_exprs();
    const auto& gamma = m.christoffel_exprs();

    std::vector<std::vector<Expr>> gy(n, std::vector<Expr>(n));
    gy_.assign(n, std::vector<Expr>(n));
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) {
            Expr acc = lit(0.0);
            for (size_t j = 0; j < n; ++j)
                acc = add(acc, mul(sym(fiber[j]), gamma[h][j][i]));
            gy[h][i] = acc;
            gy_[h][i] = bind_slots(acc, bc);
        }

    for (const auto& [fname, X] : m.spec().vector_fields) {
        std::vector<std::vector<Expr>> S = m.covariant_derivative_exprs(fname);

        std::vector<Expr> X_low(n, lit(0.0));
        for (size_t i = 0; i < n; ++i)
            for (size_t h = 0; h < n; ++h)
                X_low[i] = add(X_low[i], mul(g[i][h], X[h]));

        std::vector<std::vector<Expr>> S_low(n, std::vector<Expr>(n, lit(0.0)));
        for (size_t l = 0; l < n; ++l)
            for (size_t i = 0; i < n; ++i)
                for (size_t h = 0; h < n; ++h)
                    S_low[l][i] = add(S_low[l][i], mul(g[i][h], S[l][h]));

        std::vector<Expr> nX_up(n, lit(0.0)), nX_low(n, lit(0.0));
        for (size_t h = 0; h < n; ++h)
            for (size_t l = 0; l < n; ++l) {
                nX_up[h] = add(nX_up[h], mul(sym(fiber[l]), S[l][h]));
                nX_low[h] = add(nX_low[h], mul(sym(fiber[l]), S_low[l][h]));
            }

        for (LiftKind kind :
             {LiftKind::Vertical, LiftKind::Complete, LiftKind::Horizontal}) {
            Tables t;
            t.field = fname;
            t.kind = kind;
            std::vector<Expr> vec(2 * n, lit(0.0));
            std::vector<Expr> cov(2 * n, lit(0.0));
            for (size_t h = 0; h < n; ++h) {
                switch (kind) {
                    case LiftKind::Vertical:
                        vec[n + h] = X[h];
                        cov[h] = X_low[h];
                        cov[n + h] = X_low[h];
                        break;
                    case LiftKind::Complete:
                        vec[h] = X[h];
                        vec[n + h] = nX_up[h];
                        cov[h] = nX_low[h];
                        cov[n + h] = add(X_low[h], nX_low[h]);
                        break;
                    case LiftKind::Horizontal:
                        vec[h] = X[h];
                        cov[n + h] = X_low[h];
                        break;
                }
            }
            t.vec.resize(2 * n);
            t.cov.resize(2 * n);
            t.dvec.assign(2 * n, std::vector<Expr>(2 * n));
            t.dcov.assign(2 * n, std::vector<Expr>(2 * n));
            for (size_t A = 0; A < 2 * n; ++A) {
                t.vec[A] = bind_slots(vec[A], bc);
                t.cov[A] = bind_slots(cov[A], bc);
                for (size_t C = 0; C < 2 * n; ++C) {
                    t.dvec[C][A] = bind_slots(diff(vec[A], bc[C]), bc);
                    t.dcov[C][A] = bind_slots(diff(cov[A], bc[C]), bc);
                }
            }
            tables_.push_back(std::move(t));
        }
    }
}

const GenericDerivativeEngine::Tables& GenericDerivativeEngine::tables(
    const std::string& field, LiftKind kind) const {
    for (const auto& t : tables_)
        if (t.field == field && t.kind == kind) return t;
    throw std::invalid_argument("unknown vector field '" + field + "'");
}

Block2Tensor GenericDerivativeEngine::vector_assembly(const std::string& field,
                                                      LiftKind kind,
                                                      const BundlePoint& q) const {
    const size_t n = n_;
    const size_t N = 2 * n;
    const Tables& t = tables(field, kind);
    std::vector<double> p = q.xy();

    Mat gyv(n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) gyv(h, i) = eval(gy_[h][i], p);

    std::vector<double> comp(N);
    Mat dcomp(N, N);  // (C, A)
    for (size_t A = 0; A < N; ++A) {
        comp[A] = eval(t.vec[A], p);
        for (size_t C = 0; C < N; ++C) dcomp(C, A) = eval(t.dvec[C][A], p);
    }

    BundleConnection conn = bundle_connection_at(*m_, q);
    auto coeff = [&](size_t alpha, size_t gamma, size_t beta) {
        return conn.coeff[alpha >= n][gamma >= n][beta >= n](alpha % n, gamma % n,
                                                             beta % n);
    };
    // frame derivative: unbarred directions are d_xj - G^m_j d_ym
    auto frame_deriv = [&](size_t gamma, size_t A) {
        if (gamma < n) {
            double v = dcomp(gamma, A);
            for (size_t mm = 0; mm < n; ++mm) v -= gyv(mm, gamma) * dcomp(n + mm, A);
            return v;
        }
        return dcomp(gamma, A);
    };

    Mat out(N, N);  // (gamma, alpha)
    for (size_t gamma = 0; gamma < N; ++gamma)
        for (size_t alpha = 0; alpha < N; ++alpha) {
            double v = frame_deriv(gamma, alpha);
            for (size_t beta = 0; beta < N; ++beta)
                v += coeff(alpha, gamma, beta) * comp[beta];
            out(gamma, alpha) = v;
        }
    return Block2Tensor::from_full(out, Frame::Adapted, Variance::Mixed);
}

Block2Tensor GenericDerivativeEngine::covector_assembly(const std::string& field,
                                                        LiftKind kind,
                                                        const BundlePoint& q) const {
    const size_t n = n_;
    const size_t N = 2 * n;
    const Tables& t = tables(field, kind);
    std::vector<double> p = q.xy();

    Mat gyv(n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) gyv(h, i) = eval(gy_[h][i], p);

    std::vector<double> comp(N);
    Mat dcomp(N, N);
    for (size_t A = 0; A < N; ++A) {
        comp[A] = eval(t.cov[A], p);
        for (size_t C = 0; C < N; ++C) dcomp(C, A) = eval(t.dcov[C][A], p);
    }

    BundleConnection conn = bundle_connection_at(*m_, q);
    auto coeff = [&](size_t alpha, size_t gamma, size_t beta) {
        return conn.coeff[alpha >= n][gamma >= n][beta >= n](alpha % n, gamma % n,
                                                             beta % n);
    };
    auto frame_deriv = [&](size_t gamma, size_t A) {
        if (gamma < n) {
            double v = dcomp(gamma, A);
            for (size_t mm = 0; mm < n; ++mm) v -= gyv(mm, gamma) * dcomp(n + mm, A);
            return v;
        }
        return dcomp(gamma, A);
    };

    Mat out(N, N);  // (gamma, beta)
    for (size_t gamma = 0; gamma < N; ++gamma)
        for (size_t beta = 0; beta < N; ++beta) {
            double v = frame_deriv(gamma, beta);
            for (size_t alpha = 0; alpha < N; ++alpha)
                v -= coeff(alpha, gamma, beta) * comp[alpha];
            out(gamma, beta) = v;
        }
    return Block2Tensor::from_full(out, Frame::Adapted, Variance::Covariant);
}

ClosednessReport closedness_check(const Manifold& m, const std::string& field,
                                  const std::vector<BundlePoint>& samples) {
    ClosednessReport rep;
    rep.field = field;
    double scale = 0.0;
    for (const auto& q : samples) {
        LiftIngredients in = lift_ingredients(m, field, q);
        rep.antisym_residual =
            std::max(rep.antisym_residual, max_abs(in.S_low - transpose(in.S_low)));
        rep.second_residual = std::max(rep.second_residual, max_abs(in.A2_low));
        Block2Tensor rot = rotation_lift(m, field, LiftKind::Complete, q);
        rep.rotation_max = std::max(rep.rotation_max, rot.max_abs());
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                rep.block_max[a][b] =
                    std::max(rep.block_max[a][b], rot.max_block_abs(a, b));
        scale = std::max({scale, max_abs(in.S_low), max_abs(in.A2y_low),
                          max_abs(in.X_low), max_abs(in.P)});
    }
    rep.threshold = 1e-9 * (1.0 + scale);
    rep.conditions_hold = rep.antisym_residual <= rep.threshold &&
                          rep.second_residual <= rep.threshold;
    rep.closed_on_samples = rep.rotation_max <= rep.threshold;
    rep.implication_consistent = !rep.conditions_hold || rep.closed_on_samples;
    return rep;
}

Classification classify_field(const Manifold& m, const Oracle& oracle,
                              const std::string& field,
                              const std::vector<BundlePoint>& samples) {
    if (samples.empty()) throw std::invalid_argument("classify_field: no samples");
    Classification c;
    c.field = field;

    double scale = 0.0;
    std::vector<double> base_parallel_per_point(samples.size(), 0.0);
    for (size_t k = 0; k < samples.size(); ++k) {
        const auto& q = samples[k];
        LiftIngredients in = lift_ingredients(m, field, q);
        Mat St = transpose(in.S_low);
        c.base_killing_res = std::max(c.base_killing_res, max_abs(in.S_low + St));
        double par = max_abs(in.S_up);
        base_parallel_per_point[k] = par;
        c.base_parallel_res = std::max(c.base_parallel_res, par);
        c.base_second_res = std::max(c.base_second_res, max_abs(in.A2_up));
        c.base_closed_res = std::max(c.base_closed_res, max_abs(in.S_low - St));
        KillingIdentityResiduals idr = killing_identity_residuals(in);
        c.identity.circulated = std::max(c.identity.circulated, idr.circulated);
        c.identity.single_term = std::max(c.identity.single_term, idr.single_term);
        c.identity.symmetrized = std::max(c.identity.symmetrized, idr.symmetrized);
        scale = std::max({scale, max_abs(in.X_up), max_abs(in.X_low),
                          max_abs(in.S_up), max_abs(in.S_low), max_abs(in.A2y_low),
                          max_abs(in.P), max_abs(in.Q), max_abs(in.C_mid),
                          max_abs(in.C_last), max_abs(in.CD_mid)});
    }
    c.threshold = 1e-9 * (1.0 + scale);
    c.base_killing = c.base_killing_res <= c.threshold;
    c.base_parallel = c.base_parallel_res <= c.threshold;
    c.base_second_zero = c.base_second_res <= c.threshold;
    c.base_closed = c.base_closed_res <= c.threshold;

    for (LiftKind kind :
         {LiftKind::Vertical, LiftKind::Complete, LiftKind::Horizontal}) {
        LiftAnalysis la;
        la.field = field;
        la.kind = kind;
        la.cov_deriv_per_point.resize(samples.size());
        la.lie_per_point.resize(samples.size());
        for (size_t k = 0; k < samples.size(); ++k) {
            const auto& q = samples[k];
            Block2Tensor cov = cov_deriv_lift(m, field, kind, q);
            Block2Tensor rot = rotation_lift(m, field, kind, q);
            Block2Tensor lie = lie_derivative_lift(m, field, kind, q);
            la.cov_deriv_per_point[k] = cov.max_abs();
            la.lie_per_point[k] = lie.max_abs();
            la.rotation_max = std::max(la.rotation_max, rot.max_abs());
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    la.cov_block_max[a][b] =
                        std::max(la.cov_block_max[a][b], cov.max_block_abs(a, b));
                    la.lie_block_max[a][b] =
                        std::max(la.lie_block_max[a][b], lie.max_block_abs(a, b));
                }

            Block2Tensor cov_o =
                oracle.to_adapted_mixed(q, oracle.cov_deriv_induced(field, kind, q));
            Block2Tensor lie_o =
                oracle.to_adapted_cov2(q, oracle.lie_derivative_induced(field, kind, q));
            la.cov_two_engine_dev =
                std::max(la.cov_two_engine_dev, block_sub(cov, cov_o).max_abs());
            la.lie_two_engine_dev =
                std::max(la.lie_two_engine_dev, block_sub(lie, lie_o).max_abs());
        }
        la.cov_deriv_max = *std::max_element(la.cov_deriv_per_point.begin(),
                                             la.cov_deriv_per_point.end());
        la.lie_max =
            *std::max_element(la.lie_per_point.begin(), la.lie_per_point.end());
        la.cov_witness = argmax(la.cov_deriv_per_point);
        la.lie_witness = argmax(la.lie_per_point);
        c.lifts.push_back(std::move(la));
    }

    auto witness_of = [&](size_t idx, TheoremAudit& a) {
        a.witness_x = samples[idx].x;
        a.witness_y = samples[idx].y;
    };
    auto verdict_of = [&](const TheoremAudit& a) -> std::string {
        if (a.hypothesis == a.conclusion) return "consistent";
        if (a.two_engine_dev <= 1e-8) return "counterexample-candidate";
        return "engines-disagree";
    };

    // parallel-transport statement, one audit per lift kind
    for (const LiftAnalysis& la : c.lifts) {
        TheoremAudit a;
        a.id = "T1";
        a.field = field;
        a.lift = lift_kind_name(la.kind);
        a.base_killing = c.base_killing;
        a.base_parallel = c.base_parallel;
        a.base_second_zero = c.base_second_zero;
        a.base_killing_res = c.base_killing_res;
        a.base_parallel_res = c.base_parallel_res;
        a.base_second_res = c.base_second_res;
        a.threshold = c.threshold;
        a.hypothesis = c.base_parallel;
        a.conclusion = la.cov_deriv_max <= c.threshold;
        a.conclusion_res = la.cov_deriv_max;
        a.two_engine_dev = la.cov_two_engine_dev;
        witness_of(a.conclusion ? argmax(base_parallel_per_point) : la.cov_witness, a);
        a.verdict = verdict_of(a);
        c.audits.push_back(std::move(a));
    }

    // Killing statements for the complete and horizontal lifts
    for (LiftKind kind : {LiftKind::Complete, LiftKind::Horizontal}) {
        const LiftAnalysis& la = c.lifts[kind == LiftKind::Complete ? 1 : 2];
        TheoremAudit a;
        a.id = kind == LiftKind::Complete ? "T2a" : "T2b";
        a.field = field;
        a.lift = lift_kind_name(kind);
        a.base_killing = c.base_killing;
        a.base_parallel = c.base_parallel;
        a.base_second_zero = c.base_second_zero;
        a.base_killing_res = c.base_killing_res;
        a.base_parallel_res = c.base_parallel_res;
        a.base_second_res = c.base_second_res;
        a.threshold = c.threshold;
        a.hypothesis = kind == LiftKind::Complete
                           ? (c.base_killing && c.base_parallel)
                           : (c.base_killing && c.base_second_zero);
        a.conclusion = la.lie_max <= c.threshold;
        a.conclusion_res = la.lie_max;
        a.two_engine_dev = la.lie_two_engine_dev;
        witness_of(la.lie_witness, a);
        a.verdict = verdict_of(a);
        c.audits.push_back(std::move(a));
    }
    return c;
}

}  // namespace liftcheck
