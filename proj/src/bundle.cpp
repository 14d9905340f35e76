#include "liftcheck/bundle.hpp"

#include <stdexcept>

namespace liftcheck {

const char* frame_name(Frame f) {
    return f == Frame::Induced ? "induced" : "adapted";
}

const char* variance_name(Variance v) {
    switch (v) {
        case Variance::Covariant: return "covariant";
        case Variance::Contravariant: return "contravariant";
        case Variance::Mixed: return "mixed";
    }
    return "?";
}

const char* lift_kind_name(LiftKind k) {
    switch (k) {
        case LiftKind::Vertical: return "vertical";
        case LiftKind::Complete: return "complete";
        case LiftKind::Horizontal: return "horizontal";
    }
    return "?";
}

LiftKind lift_kind_from_name(const std::string& s) {
    if (s == "vertical") return LiftKind::Vertical;
    if (s == "complete") return LiftKind::Complete;
    if (s == "horizontal") return LiftKind::Horizontal;
    throw std::invalid_argument("unknown lift kind '" + s +
                                "' (vertical, complete, horizontal)");
}

std::vector<double> BundlePoint::xy() const {
    std::vector<double> v = x;
    v.insert(v.end(), y.begin(), y.end());
    return v;
}

void BlockVector::require(Frame f, Variance v, const std::string& where) const {
    if (frame != f || variance != v)
        throw FrameMismatch(where + ": expected " + frame_name(f) + "/" +
                            variance_name(v) + ", got " + frame_name(frame) + "/" +
                            variance_name(variance));
}

std::vector<double> BlockVector::full() const {
    std::vector<double> v = u;
    v.insert(v.end(), b.begin(), b.end());
    return v;
}

double BlockVector::max_abs() const {
    return std::max(liftcheck::max_abs(u), liftcheck::max_abs(b));
}

void Block2Tensor::require(Frame f, Variance v, const std::string& where) const {
    if (frame != f || variance != v)
        throw FrameMismatch(where + ": expected " + frame_name(f) + "/" +
                            variance_name(v) + ", got " + frame_name(frame) + "/" +
                            variance_name(variance));
}

Mat Block2Tensor::full() const {
    const size_t n = uu.rows();
    Mat m(2 * n, 2 * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            m(i, j) = uu(i, j);
            m(i, n + j) = ub(i, j);
            m(n + i, j) = bu(i, j);
            m(n + i, n + j) = bb(i, j);
        }
    return m;
}

Block2Tensor Block2Tensor::from_full(const Mat& m, Frame f, Variance v) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw std::invalid_argument("block split needs a square 2n matrix");
    const size_t n = m.rows() / 2;
    Block2Tensor t{f, v, Mat(n, n), Mat(n, n), Mat(n, n), Mat(n, n)};
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            t.uu(i, j) = m(i, j);
            t.ub(i, j) = m(i, n + j);
            t.bu(i, j) = m(n + i, j);
            t.bb(i, j) = m(n + i, n + j);
        }
    return t;
}

double Block2Tensor::max_abs() const {
    return std::max(std::max(liftcheck::max_abs(uu), liftcheck::max_abs(ub)),
                    std::max(liftcheck::max_abs(bu), liftcheck::max_abs(bb)));
}

double Block2Tensor::max_block_abs(int first_barred, int second_barred) const {
    const Mat& m = first_barred ? (second_barred ? bb : bu)
                                : (second_barred ? ub : uu);
    return liftcheck::max_abs(m);
}

Block2Tensor block_transpose(const Block2Tensor& t) {
    return {t.frame, t.variance, transpose(t.uu), transpose(t.bu),
            transpose(t.ub), transpose(t.bb)};
}

Block2Tensor block_add(const Block2Tensor& a, const Block2Tensor& b) {
    if (a.frame != b.frame || a.variance != b.variance)
        throw FrameMismatch("block_add: mismatched tags");
    return {a.frame, a.variance, a.uu + b.uu, a.ub + b.ub, a.bu + b.bu, a.bb + b.bb};
}

Block2Tensor block_sub(const Block2Tensor& a, const Block2Tensor& b) {
    if (a.frame != b.frame || a.variance != b.variance)
        throw FrameMismatch("block_sub: mismatched tags");
    return {a.frame, a.variance, a.uu - b.uu, a.ub - b.ub, a.bu - b.bu, a.bb - b.bb};
}

BundleConnection BundleConnection::zeros(size_t n) {
    BundleConnection c;
    c.n = n;
    for (int a = 0; a < 2; ++a)
        for (int g = 0; g < 2; ++g)
            for (int b = 0; b < 2; ++b) c.coeff[a][g][b] = Tensor3(n, n, n);
    return c;
}

double BundleConnection::max_abs() const {
    double m = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int g = 0; g < 2; ++g)
            for (int b = 0; b < 2; ++b)
                m = std::max(m, liftcheck::max_abs(coeff[a][g][b]));
    return m;
}

Mat gamma_y_at(const Manifold& m, const BundlePoint& q) {
    const size_t n = m.dim();
    Tensor3 gam = m.christoffel_at(q.x);
    Mat gy(n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (size_t j = 0; j < n; ++j) v += q.y[j] * gam(h, j, i);
            gy(h, i) = v;
        }
    return gy;
}

AdaptedFrame adapted_frame_at(const Manifold& m, const BundlePoint& q) {
    const size_t n = m.dim();
    Mat gy = gamma_y_at(m, q);
    Mat F(2 * n, 2 * n), D(2 * n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        F(i, i) = 1.0;
        F(n + i, n + i) = 1.0;
        D(i, i) = 1.0;
        D(n + i, n + i) = 1.0;
    }
    for (size_t h = 0; h < n; ++h)
        for (size_t i = 0; i < n; ++i) {
            F(n + h, i) = -gy(h, i);  // e_i = d_xi - G^h_i d_yh
            D(n + h, i) = gy(h, i);   // delta y^h = G^h_i dx^i + dy^h
        }
    return {std::move(F), std::move(D)};
}

Block2Tensor metric_adapted_at(const Manifold& m, const BundlePoint& q) {
    const size_t n = m.dim();
    Mat g = m.metric_at(q.x);
    return {Frame::Adapted, Variance::Covariant, Mat(n, n), g, g, g};
}

Block2Tensor metric_adapted_inv_at(const Manifold& m, const BundlePoint& q) {
    const size_t n = m.dim();
    Mat gi = m.inverse_metric_at(q.x);
    Mat neg_gi(n, n);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) neg_gi(a, b) = -gi(a, b);
    return {Frame::Adapted, Variance::Contravariant, neg_gi, gi, gi, Mat(n, n)};
}

Block2Tensor metric_induced_at(const Manifold& m, const BundlePoint& q) {
    const size_t n = m.dim();
    Mat g = m.metric_at(q.x);
    Mat gy = gamma_y_at(m, q);
    Block2Tensor t{Frame::Induced, Variance::Covariant, Mat(n, n), Mat(n, n),
                   Mat(n, n), Mat(n, n)};
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            double v = 0.0;
            for (size_t j = 0; j < n; ++j)
                v += g(a, j) * gy(j, b) + g(b, j) * gy(j, a);
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) v += g(i, j) * gy(i, a) * gy(j, b);
            t.uu(a, b) = v;

            double w = g(a, b);
            for (size_t j = 0; j < n; ++j) w += g(j, b) * gy(j, a);
            t.ub(a, b) = w;
            t.bu(b, a) = w;  // symmetry of the assembled 2n metric

            t.bb(a, b) = g(a, b);
        }
    return t;
}

BundleConnection bundle_connection_at(const Manifold& m, const BundlePoint& q) {
    const size_t n = m.dim();
    Tensor3 gam = m.christoffel_at(q.x);
    Tensor4 R = m.riemann_at(q.x);

    // ys_mid(h, j, i) = y^s R^h_{sji}; ys_last(h, j, i) = y^s R^h_{sij}
    Tensor3 ys_mid(n, n, n), ys_last(n, n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i) {
                double vm = 0.0, vl = 0.0;
                for (size_t s = 0; s < n; ++s) {
                    vm += q.y[s] * R(h, s, j, i);
                    vl += q.y[s] * R(h, s, i, j);
                }
                ys_mid(h, j, i) = vm;
                ys_last(h, j, i) = vl;
            }

    BundleConnection c = BundleConnection::zeros(n);
    for (size_t h = 0; h < n; ++h)
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i) {
                double G = gam(h, j, i);
                double rm = ys_mid(h, j, i);
                double rl = ys_last(h, j, i);
                c.coeff[0][0][0](h, j, i) = G - 0.5 * (rm + rl);
                c.coeff[1][0][0](h, j, i) = rm;
                c.coeff[0][0][1](h, j, i) = -0.5 * rl;
                c.coeff[1][0][1](h, j, i) = G + 0.5 * rl;
                c.coeff[0][1][0](h, j, i) = -0.5 * rm;
                c.coeff[1][1][0](h, j, i) = 0.5 * rm;
                // coeff[0][1][1] and coeff[1][1][1] stay identically zero
            }
    return c;
}

BlockVector lift_vector(const Manifold& m, const std::string& field, LiftKind kind,
                        const BundlePoint& q, Frame frame) {
    const size_t n = m.dim();
    FieldDerivs d = m.covariant_derivatives_at(field, q.x);
    BlockVector v{frame, Variance::Contravariant, std::vector<double>(n, 0.0),
                  std::vector<double>(n, 0.0)};
    switch (kind) {
        case LiftKind::Vertical:
            v.b = d.X_up;  // same in both frames
            return v;
        case LiftKind::Complete:
            v.u = d.X_up;
            for (size_t h = 0; h < n; ++h) {
                double acc = 0.0;
                for (size_t l = 0; l < n; ++l)
                    acc += q.y[l] * (frame == Frame::Adapted ? d.S_up(l, h)
                                                             : d.partials(l, h));
                v.b[h] = acc;
            }
            return v;
        case LiftKind::Horizontal:
            v.u = d.X_up;
            if (frame == Frame::Induced) {
                Mat gy = gamma_y_at(m, q);
                for (size_t h = 0; h < n; ++h) {
                    double acc = 0.0;
                    for (size_t i = 0; i < n; ++i) acc -= gy(h, i) * d.X_up[i];
                    v.b[h] = acc;
                }
            }
            return v;
    }
    throw std::invalid_argument("bad lift kind");
}

BlockVector lift_oneform(const Manifold& m, const std::string& form, LiftKind kind,
                         const BundlePoint& q) {
    const size_t n = m.dim();
    std::vector<double> w = m.one_form_at(form, q.x);
    BlockVector v{Frame::Induced, Variance::Covariant, std::vector<double>(n, 0.0),
                  std::vector<double>(n, 0.0)};
    switch (kind) {
        case LiftKind::Vertical:
            v.u = w;
            return v;
        case LiftKind::Complete: {
            const auto& comps = m.one_form_exprs(form);
            for (size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (size_t l = 0; l < n; ++l) {
                    Expr de = bind_slots(diff(comps[i], m.coords()[l]), m.coords());
                    acc += q.y[l] * eval(de, q.x);
                }
                v.u[i] = acc;
            }
            v.b = w;
            return v;
        }
        case LiftKind::Horizontal: {
            Mat gy = gamma_y_at(m, q);
            for (size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (size_t k = 0; k < n; ++k) acc -= gy(k, i) * w[k];
                v.u[i] = acc;
            }
            v.b = w;
            return v;
        }
    }
    throw std::invalid_argument("bad lift kind");
}

BlockVector associated_covector(const Manifold& m, const std::string& field,
                                LiftKind kind, const BundlePoint& q) {
    const size_t n = m.dim();
    FieldDerivs d = m.covariant_derivatives_at(field, q.x);
    std::vector<double> nX(n, 0.0);  // y^l nabla_l X_i
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < n; ++l) nX[i] += q.y[l] * d.S_low(l, i);

    BlockVector v{Frame::Adapted, Variance::Covariant, std::vector<double>(n, 0.0),
                  std::vector<double>(n, 0.0)};
    switch (kind) {
        case LiftKind::Vertical:
            v.u = d.X_low;
            v.b = d.X_low;
            return v;
        case LiftKind::Complete:
            v.u = nX;
            for (size_t i = 0; i < n; ++i) v.b[i] = d.X_low[i] + nX[i];
            return v;
        case LiftKind::Horizontal:
            v.b = d.X_low;
            return v;
    }
    throw std::invalid_argument("bad lift kind");
}

BlockVector lower_with_metric(const Block2Tensor& metric, const BlockVector& v) {
    metric.require(metric.frame, Variance::Covariant, "lower_with_metric");
    if (v.variance != Variance::Contravariant)
        throw FrameMismatch("lower_with_metric: vector must be contravariant");
    if (v.frame != metric.frame)
        throw FrameMismatch("lower_with_metric: frame mismatch");
    const size_t n = metric.uu.rows();
    BlockVector r{v.frame, Variance::Covariant, std::vector<double>(n, 0.0),
                  std::vector<double>(n, 0.0)};
    for (size_t i = 0; i < n; ++i) {
        double a = 0.0, b = 0.0;
        for (size_t j = 0; j < n; ++j) {
            a += metric.uu(i, j) * v.u[j] + metric.ub(i, j) * v.b[j];
            b += metric.bu(i, j) * v.u[j] + metric.bb(i, j) * v.b[j];
        }
        r.u[i] = a;
        r.b[i] = b;
    }
    return r;
}

}  // namespace liftcheck
