#include "liftcheck/oracle.hpp"

#include <functional>
#include <stdexcept>

namespace liftcheck {

Oracle::Oracle(const Manifold& m) : m_(&m), n_(m.dim()) {
    const size_t n = n_;
    const auto& coords = m.coords();
    const auto& fiber = m.fiber_coords();
    const auto& bc = m.bundle_coords();
    const auto& g = m.metric_exprs();
    const auto& gamma = m.christoffel_exprs();

    // G^h_i = y^j Gamma^h_{ji}
    std::vector<std::vector<Expr>> gy(n, std::vector<Expr>(n));
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) {
            Expr acc = lit(0.0);
            for (size_t j = 0; j < n; ++j)
                acc = add(acc, mul(sym(fiber[j]), gamma[h][j][i]));
            gy[h][i] = acc;
        }

    // bundle metric blocks in induced coordinates:
    //   g~_ab        = g_aj G^j_b + g_bj G^j_a + g_ij G^i_a G^j_b
    //   g~_a,bbar    = g_ab + g_jb G^j_a
    //   g~_abar,bbar = g_ab
    std::vector<std::vector<Expr>> gt(2 * n, std::vector<Expr>(2 * n));
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            Expr uu = lit(0.0);
            for (size_t j = 0; j < n; ++j) {
                uu = add(uu, mul(g[a][j], gy[j][b]));
                uu = add(uu, mul(g[b][j], gy[j][a]));
            }
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    uu = add(uu, mul(g[i][j], mul(gy[i][a], gy[j][b])));
            gt[a][b] = uu;

            Expr ub = g[a][b];
            for (size_t j = 0; j < n; ++j) ub = add(ub, mul(g[j][b], gy[j][a]));
            gt[a][n + b] = ub;
            gt[n + b][a] = ub;

            gt[n + a][n + b] = g[a][b];
        }

    gt_.assign(2 * n, std::vector<Expr>(2 * n));
    dgt_.assign(2 * n, std::vector<std::vector<Expr>>(2 * n, std::vector<Expr>(2 * n)));
    for (size_t A = 0; A < 2 * n; ++A)
        for (size_t B = 0; B < 2 * n; ++B) {
            gt_[A][B] = bind_slots(gt[A][B], bc);
            for (size_t C = 0; C < 2 * n; ++C)
                dgt_[C][A][B] = bind_slots(diff(gt[A][B], bc[C]), bc);
        }

    gy_.assign(n, std::vector<Expr>(n));
    dgy_.assign(2 * n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) {
            gy_[h][i] = bind_slots(gy[h][i], bc);
            for (size_t C = 0; C < 2 * n; ++C)
                dgy_[C][h][i] = bind_slots(diff(gy[h][i], bc[C]), bc);
        }

    // induced lift components for every declared field and kind:
    // vertical (0, X), complete (X, y^l d_l X), horizontal (X, -G^h_i X^i)
    for (const auto& [fname, X] : m.spec().vector_fields) {
        for (LiftKind kind :
             {LiftKind::Vertical, LiftKind::Complete, LiftKind::Horizontal}) {
            LiftTables lt;
            lt.field = fname;
            lt.kind = kind;
            std::vector<Expr> comp(2 * n, lit(0.0));
            for (size_t h = 0; h < n; ++h) {
                switch (kind) {
                    case LiftKind::Vertical:
                        comp[n + h] = X[h];
                        break;
                    case LiftKind::Complete: {
                        comp[h] = X[h];
                        Expr acc = lit(0.0);
                        for (size_t l = 0; l < n; ++l)
                            acc = add(acc, mul(sym(fiber[l]), diff(X[h], coords[l])));
                        comp[n + h] = acc;
                        break;
                    }
                    case LiftKind::Horizontal: {
                        comp[h] = X[h];
                        Expr acc = lit(0.0);
                        for (size_t i = 0; i < n; ++i)
                            acc = sub(acc, mul(gy[h][i], X[i]));
                        comp[n + h] = acc;
                        break;
                    }
                }
            }
            lt.comp.resize(2 * n);
            lt.dcomp.assign(2 * n, std::vector<Expr>(2 * n));
            for (size_t A = 0; A < 2 * n; ++A) {
                lt.comp[A] = bind_slots(comp[A], bc);
                for (size_t C = 0; C < 2 * n; ++C)
                    lt.dcomp[C][A] = bind_slots(diff(comp[A], bc[C]), bc);
            }
            lifts_.push_back(std::move(lt));
        }
    }
}

Mat Oracle::induced_metric_at(const BundlePoint& q) const {
    const size_t N = 2 * n_;
    std::vector<double> p = q.xy();
    Mat m(N, N);
    for (size_t A = 0; A < N; ++A)
        for (size_t B = 0; B < N; ++B) m(A, B) = eval(gt_[A][B], p);
    return m;
}

Tensor3 Oracle::levi_civita_induced(const BundlePoint& q) const {
    const size_t N = 2 * n_;
    std::vector<double> p = q.xy();
    Mat gt = induced_metric_at(q);
    Mat gti = lu_inverse(gt);

    Tensor3 dg(N, N, N);  // (C, A, B) = d_C g~_AB
    for (size_t C = 0; C < N; ++C)
        for (size_t A = 0; A < N; ++A)
            for (size_t B = 0; B < N; ++B) dg(C, A, B) = eval(dgt_[C][A][B], p);

    Tensor3 lc(N, N, N);
    for (size_t A = 0; A < N; ++A)
        for (size_t B = 0; B < N; ++B)
            for (size_t C = 0; C <= B; ++C) {
                double v = 0.0;
                for (size_t D = 0; D < N; ++D)
                    v += gti(A, D) * (dg(B, D, C) + dg(C, D, B) - dg(D, B, C));
                v *= 0.5;
                lc(A, B, C) = v;
                lc(A, C, B) = v;
            }
    return lc;
}

Mat Oracle::frame_at(const BundlePoint& q) const {
    const size_t n = n_;
    std::vector<double> p = q.xy();
    Mat F(2 * n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        F(i, i) = 1.0;
        F(n + i, n + i) = 1.0;
    }
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) F(n + h, i) = -eval(gy_[h][i], p);
    return F;
}

Mat Oracle::dual_at(const BundlePoint& q) const {
    const size_t n = n_;
    std::vector<double> p = q.xy();
    Mat D(2 * n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        D(i, i) = 1.0;
        D(n + i, n + i) = 1.0;
    }
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) D(n + h, i) = eval(gy_[h][i], p);
    return D;
}

BundleConnection Oracle::connection_to_adapted(const BundlePoint& q,
                                               const Tensor3& induced) const {
    const size_t n = n_;
    const size_t N = 2 * n;
    std::vector<double> p = q.xy();
    Mat F = frame_at(q);
    Mat D = dual_at(q);
    Mat gyv(n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) gyv(h, i) = eval(gy_[h][i], p);

    // dF(C, A, beta) = d_C F^A_beta; only the lower-left block of F varies
    Tensor3 dF(N, N, N);
    for (size_t C = 0; C < N; ++C)
        for (size_t h = 0; h < n; ++h)
            for (size_t i = 0; i < n; ++i)
                dF(C, n + h, i) = -eval(dgy_[C][h][i], p);

    // e_gamma(F^A_beta): gamma unbarred j acts as d_xj - G^m_j d_ym
    auto frame_deriv = [&](size_t gamma, size_t A, size_t beta) {
        if (gamma < n) {
            double v = dF(gamma, A, beta);
            for (size_t mm = 0; mm < n; ++mm)
                v -= gyv(mm, gamma) * dF(n + mm, A, beta);
            return v;
        }
        return dF(gamma, A, beta);  // e_jbar = d_yj
    };

    BundleConnection out = BundleConnection::zeros(n);
    for (size_t alpha = 0; alpha < N; ++alpha)
        for (size_t gamma = 0; gamma < N; ++gamma)
            for (size_t beta = 0; beta < N; ++beta) {
                double v = 0.0;
                for (size_t C = 0; C < N; ++C) {
                    double inner = frame_deriv(gamma, C, beta);
                    for (size_t A = 0; A < N; ++A) {
                        if (F(A, gamma) == 0.0) continue;
                        for (size_t B = 0; B < N; ++B)
                            inner += F(A, gamma) * F(B, beta) * induced(C, A, B);
                    }
                    v += D(alpha, C) * inner;
                }
                out.coeff[alpha >= n][gamma >= n][beta >= n](
                    alpha % n, gamma % n, beta % n) = v;
            }
    return out;
}

Tensor3 Oracle::connection_to_induced(const BundlePoint& q,
                                      const BundleConnection& adapted) const {
    const size_t n = n_;
    const size_t N = 2 * n;
    std::vector<double> p = q.xy();
    Mat F = frame_at(q);
    Mat D = dual_at(q);

    // dD(A, alpha, B) = d_A D^alpha_B; only the lower-left block varies
    Tensor3 dD(N, N, N);
    for (size_t A = 0; A < N; ++A)
        for (size_t h = 0; h < n; ++h)
            for (size_t i = 0; i < n; ++i)
                dD(A, n + h, i) = eval(dgy_[A][h][i], p);

    auto gt_coeff = [&](size_t alpha, size_t gamma, size_t beta) {
        return adapted.coeff[alpha >= n][gamma >= n][beta >= n](
            alpha % n, gamma % n, beta % n);
    };

    Tensor3 out(N, N, N);
    for (size_t C = 0; C < N; ++C)
        for (size_t A = 0; A < N; ++A)
            for (size_t B = 0; B < N; ++B) {
                double v = 0.0;
                for (size_t alpha = 0; alpha < N; ++alpha) {
                    double inner = dD(A, alpha, B);
                    for (size_t gamma = 0; gamma < N; ++gamma) {
                        if (D(gamma, A) == 0.0) continue;
                        for (size_t beta = 0; beta < N; ++beta)
                            inner += D(gamma, A) * D(beta, B) *
                                     gt_coeff(alpha, gamma, beta);
                    }
                    v += F(C, alpha) * inner;
                }
                out(C, A, B) = v;
            }
    return out;
}

const Oracle::LiftTables& Oracle::lift_tables(const std::string& field,
                                              LiftKind kind) const {
    for (const auto& lt : lifts_)
        if (lt.field == field && lt.kind == kind) return lt;
    throw std::invalid_argument("unknown vector field '" + field + "'");
}

BlockVector Oracle::induced_lift(const std::string& field, LiftKind kind,
                                 const BundlePoint& q) const {
    const auto& lt = lift_tables(field, kind);
    std::vector<double> p = q.xy();
    BlockVector v{Frame::Induced, Variance::Contravariant,
                  std::vector<double>(n_, 0.0), std::vector<double>(n_, 0.0)};
    for (size_t h = 0; h < n_; ++h) {
        v.u[h] = eval(lt.comp[h], p);
        v.b[h] = eval(lt.comp[n_ + h], p);
    }
    return v;
}

Block2Tensor Oracle::lie_derivative_induced(const std::string& field, LiftKind kind,
                                            const BundlePoint& q) const {
    const size_t N = 2 * n_;
    const auto& lt = lift_tables(field, kind);
    std::vector<double> p = q.xy();

    std::vector<double> Xt(N);
    Mat dXt(N, N);  // (C, A) = d_C Xt^A
    for (size_t A = 0; A < N; ++A) {
        Xt[A] = eval(lt.comp[A], p);
        for (size_t C = 0; C < N; ++C) dXt(C, A) = eval(lt.dcomp[C][A], p);
    }
    Mat gt = induced_metric_at(q);
    Tensor3 dg(N, N, N);
    for (size_t C = 0; C < N; ++C)
        for (size_t A = 0; A < N; ++A)
            for (size_t B = 0; B < N; ++B) dg(C, A, B) = eval(dgt_[C][A][B], p);

    Mat lie(N, N);
    for (size_t A = 0; A < N; ++A)
        for (size_t B = 0; B < N; ++B) {
            double v = 0.0;
            for (size_t C = 0; C < N; ++C) {
                v += Xt[C] * dg(C, A, B);
                v += gt(C, B) * dXt(A, C);
                v += gt(A, C) * dXt(B, C);
            }
            lie(A, B) = v;
        }
    return Block2Tensor::from_full(lie, Frame::Induced, Variance::Covariant);
}

Block2Tensor Oracle::to_adapted_cov2(const BundlePoint& q,
                                     const Block2Tensor& induced) const {
    induced.require(Frame::Induced, Variance::Covariant, "to_adapted_cov2");
    Mat F = frame_at(q);
    Mat t = transpose(F) * induced.full() * F;
    return Block2Tensor::from_full(t, Frame::Adapted, Variance::Covariant);
}

Block2Tensor Oracle::to_induced_cov2(const BundlePoint& q,
                                     const Block2Tensor& adapted) const {
    adapted.require(Frame::Adapted, Variance::Covariant, "to_induced_cov2");
    Mat D = dual_at(q);
    Mat t = transpose(D) * adapted.full() * D;
    return Block2Tensor::from_full(t, Frame::Induced, Variance::Covariant);
}

Mat Oracle::cov_deriv_induced(const std::string& field, LiftKind kind,
                              const BundlePoint& q) const {
    const size_t N = 2 * n_;
    const auto& lt = lift_tables(field, kind);
    std::vector<double> p = q.xy();

    std::vector<double> Xt(N);
    Mat dXt(N, N);  // (A, C) = d_A Xt^C
    for (size_t C = 0; C < N; ++C) {
        Xt[C] = eval(lt.comp[C], p);
        for (size_t A = 0; A < N; ++A) dXt(A, C) = eval(lt.dcomp[A][C], p);
    }
    Tensor3 lc = levi_civita_induced(q);

    Mat t(N, N);
    for (size_t A = 0; A < N; ++A)
        for (size_t C = 0; C < N; ++C) {
            double v = dXt(A, C);
            for (size_t B = 0; B < N; ++B) v += lc(C, A, B) * Xt[B];
            t(A, C) = v;
        }
    return t;
}

Block2Tensor Oracle::to_adapted_mixed(const BundlePoint& q, const Mat& induced) const {
    Mat F = frame_at(q);
    Mat D = dual_at(q);
    // rows transform with F (direction index down), columns with D (index up)
    Mat t = transpose(F) * induced * transpose(D);
    return Block2Tensor::from_full(t, Frame::Adapted, Variance::Mixed);
}

namespace {

void check_interior(double v, const Interval& iv, double margin) {
    if (v - margin < iv.lo || v + margin > iv.hi)
        throw std::runtime_error(
            "finite-difference stencil leaves the sampling domain");
}

}  // namespace

double Oracle::finite_difference_audit(const std::string& quantity,
                                       const BundlePoint& q, double h) const {
    if (!(h >= 1e-7 && h <= 1e-3))
        throw std::invalid_argument("finite-difference step must lie in [1e-7, 1e-3]");
    const Manifold& m = *m_;
    const size_t n = n_;
    const auto& dom = m.spec().domain;

    if (quantity == "christoffel" || quantity == "riemann") {
        for (size_t i = 0; i < n; ++i) check_interior(q.x[i], dom[i], h);
    }

    if (quantity == "christoffel") {
        Mat gi = m.inverse_metric_at(q.x);
        Tensor3 dg(n, n, n);  // (k, a, b) = central difference of g_ab
        for (size_t k = 0; k < n; ++k) {
            Point xp = q.x, xm = q.x;
            xp[k] += h;
            xm[k] -= h;
            Mat gp = m.metric_at(xp), gm = m.metric_at(xm);
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b)
                    dg(k, a, b) = (gp(a, b) - gm(a, b)) / (2.0 * h);
        }
        Tensor3 fd(n, n, n);
        for (size_t hh = 0; hh < n; ++hh)
            for (size_t j = 0; j < n; ++j)
                for (size_t i = 0; i < n; ++i) {
                    double v = 0.0;
                    for (size_t mm = 0; mm < n; ++mm)
                        v += gi(hh, mm) * (dg(j, mm, i) + dg(i, mm, j) - dg(mm, j, i));
                    fd(hh, j, i) = 0.5 * v;
                }
        Tensor3 sym = m.christoffel_at(q.x);
        double dev = 0.0;
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                for (size_t c = 0; c < n; ++c)
                    dev = std::max(dev, std::abs(fd(a, b, c) - sym(a, b, c)));
        return dev;
    }

    if (quantity == "riemann") {
        Tensor3 gam = m.christoffel_at(q.x);
        std::vector<Tensor3> dgam(n);  // [k] = central difference of Gamma
        for (size_t k = 0; k < n; ++k) {
            Point xp = q.x, xm = q.x;
            xp[k] += h;
            xm[k] -= h;
            Tensor3 gp = m.christoffel_at(xp), gm = m.christoffel_at(xm);
            Tensor3 d(n, n, n);
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b)
                    for (size_t c = 0; c < n; ++c)
                        d(a, b, c) = (gp(a, b, c) - gm(a, b, c)) / (2.0 * h);
            dgam[k] = std::move(d);
        }
        Tensor4 sym = m.riemann_at(q.x);
        double dev = 0.0;
        for (size_t hh = 0; hh < n; ++hh)
            for (size_t k = 0; k < n; ++k)
                for (size_t j = 0; j < n; ++j)
                    for (size_t i = 0; i < n; ++i) {
                        double v = dgam[k](hh, j, i) - dgam[j](hh, k, i);
                        for (size_t mm = 0; mm < n; ++mm)
                            v += gam(hh, k, mm) * gam(mm, j, i) -
                                 gam(hh, j, mm) * gam(mm, k, i);
                        dev = std::max(dev, std::abs(v - sym(hh, k, j, i)));
                    }
        return dev;
    }

    if (quantity == "levi_civita_induced") {
        const size_t N = 2 * n;
        for (size_t i = 0; i < n; ++i) {
            check_interior(q.x[i], dom[i], h);
            check_interior(q.y[i], m.spec().fiber, h);
        }
        Mat gt = induced_metric_at(q);
        Mat gti = lu_inverse(gt);
        Tensor3 dg(N, N, N);
        for (size_t C = 0; C < N; ++C) {
            BundlePoint qp = q, qm = q;
            (C < n ? qp.x[C] : qp.y[C - n]) += h;
            (C < n ? qm.x[C] : qm.y[C - n]) -= h;
            Mat gp = induced_metric_at(qp), gm = induced_metric_at(qm);
            for (size_t A = 0; A < N; ++A)
                for (size_t B = 0; B < N; ++B)
                    dg(C, A, B) = (gp(A, B) - gm(A, B)) / (2.0 * h);
        }
        Tensor3 sym = levi_civita_induced(q);
        double dev = 0.0;
        for (size_t A = 0; A < N; ++A)
            for (size_t B = 0; B < N; ++B)
                for (size_t C = 0; C < N; ++C) {
                    double v = 0.0;
                    for (size_t D = 0; D < N; ++D)
                        v += gti(A, D) * (dg(B, D, C) + dg(C, D, B) - dg(D, B, C));
                    v *= 0.5;
                    dev = std::max(dev, std::abs(v - sym(A, B, C)));
                }
        return dev;
    }

    throw std::invalid_argument("unknown audit quantity '" + quantity +
                                "' (christoffel, riemann, levi_civita_induced)");
}

}  // namespace liftcheck
