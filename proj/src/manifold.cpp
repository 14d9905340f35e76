#include "liftcheck/manifold.hpp"

#include <stdexcept>

namespace liftcheck {

const std::vector<Expr>* ManifoldSpec::find_vector_field(const std::string& n) const {
    for (const auto& [name, comps] : vector_fields)
        if (name == n) return &comps;
    return nullptr;
}

const std::vector<Expr>* ManifoldSpec::find_one_form(const std::string& n) const {
    for (const auto& [name, comps] : one_forms)
        if (name == n) return &comps;
    return nullptr;
}

namespace {

// determinant by Laplace expansion along the first remaining row,
// recursing over the set of unused columns
Expr det_rec(const std::vector<std::vector<Expr>>& m, size_t row, unsigned cols_mask) {
    const size_t n = m.size();
    if (row == n) return lit(1.0);
    Expr acc = lit(0.0);
    int sign = 1;
    for (size_t c = 0; c < n; ++c) {
        if (!(cols_mask & (1u << c))) continue;
        Expr minor = det_rec(m, row + 1, cols_mask & ~(1u << c));
        Expr term = mul(m[row][c], minor);
        acc = (sign > 0) ? add(acc, term) : sub(acc, term);
        sign = -sign;
    }
    return acc;
}

std::vector<std::vector<Expr>> drop_row_col(const std::vector<std::vector<Expr>>& m,
                                            size_t row, size_t col) {
    std::vector<std::vector<Expr>> r;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i == row) continue;
        std::vector<Expr> line;
        for (size_t j = 0; j < m.size(); ++j)
            if (j != col) line.push_back(m[i][j]);
        r.push_back(std::move(line));
    }
    return r;
}

}  // namespace

std::pair<std::vector<std::vector<Expr>>, Expr> symbolic_inverse(
    const std::vector<std::vector<Expr>>& m) {
    const size_t n = m.size();
    if (n == 0 || n > 8)
        throw std::invalid_argument("symbolic inverse supports 1 <= n <= 8");
    Expr det = det_rec(m, 0, (1u << n) - 1);
    std::vector<std::vector<Expr>> inv(n, std::vector<Expr>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            auto minor = drop_row_col(m, j, i);  // adjugate transposes
            Expr cof = det_rec(minor, 0, minor.empty() ? 0u : (1u << minor.size()) - 1);
            if ((i + j) % 2 == 1) cof = neg(cof);
            inv[i][j] = div(cof, det);
        }
    return {std::move(inv), std::move(det)};
}

Manifold::Manifold(ManifoldSpec spec) : spec_(std::move(spec)) {
    const size_t n = spec_.dim;
    if (n == 0 || spec_.coords.size() != n)
        throw std::invalid_argument("manifold dimension/coordinate mismatch");
    if (spec_.metric.size() != n)
        throw std::invalid_argument("metric must be n x n");

    for (const auto& c : spec_.coords) fiber_coords_.push_back("y_" + c);
    bundle_coords_ = spec_.coords;
    bundle_coords_.insert(bundle_coords_.end(), fiber_coords_.begin(),
                          fiber_coords_.end());

    g_ = spec_.metric;
    auto [inv, det] = symbolic_inverse(g_);
    ginv_ = std::move(inv);
    det_ = std::move(det);

    // Gamma^h_{ji} = 1/2 g^{hm} (d_j g_{mi} + d_i g_{mj} - d_m g_{ji})
    std::vector<std::vector<std::vector<Expr>>> dg(
        n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
    for (size_t k = 0; k < n; ++k)
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                dg[k][a][b] = diff(g_[a][b], spec_.coords[k]);

    gamma_.assign(n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
    for (size_t h = 0; h < n; ++h)
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i <= j; ++i) {
                Expr acc = lit(0.0);
                for (size_t m = 0; m < n; ++m) {
                    Expr bracket = sub(add(dg[j][m][i], dg[i][m][j]), dg[m][j][i]);
                    acc = add(acc, mul(ginv_[h][m], bracket));
                }
                Expr v = mul(lit(0.5), acc);
                gamma_[h][j][i] = v;
                gamma_[h][i][j] = v;
            }

    // R^h_{kji} = d_k Gamma^h_{ji} - d_j Gamma^h_{ki}
    //           + Gamma^h_{km} Gamma^m_{ji} - Gamma^h_{jm} Gamma^m_{ki}
    riem_.assign(n, std::vector<std::vector<std::vector<Expr>>>(
                        n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n))));
    for (size_t h = 0; h < n; ++h)
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j)
                for (size_t i = 0; i < n; ++i) {
                    Expr v = sub(diff(gamma_[h][j][i], spec_.coords[k]),
                                 diff(gamma_[h][k][i], spec_.coords[j]));
                    for (size_t m = 0; m < n; ++m) {
                        v = add(v, mul(gamma_[h][k][m], gamma_[m][j][i]));
                        v = sub(v, mul(gamma_[h][j][m], gamma_[m][k][i]));
                    }
                    riem_[h][k][j][i] = v;
                }

    auto bind_mat = [&](const std::vector<std::vector<Expr>>& src) {
        std::vector<std::vector<Expr>> out(n, std::vector<Expr>(n));
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) out[a][b] = bind_slots(src[a][b], spec_.coords);
        return out;
    };
    g_bound_ = bind_mat(g_);
    ginv_bound_ = bind_mat(ginv_);
    det_bound_ = bind_slots(det_, spec_.coords);
    gamma_bound_.assign(n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
    for (size_t h = 0; h < n; ++h)
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i < n; ++i)
                gamma_bound_[h][j][i] = bind_slots(gamma_[h][j][i], spec_.coords);
    riem_bound_.assign(
        n, std::vector<std::vector<std::vector<Expr>>>(
               n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n))));
    for (size_t h = 0; h < n; ++h)
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j)
                for (size_t i = 0; i < n; ++i)
                    riem_bound_[h][k][j][i] = bind_slots(riem_[h][k][j][i], spec_.coords);

    for (const auto& [fname, comps] : spec_.vector_fields) {
        if (comps.size() != n)
            throw std::invalid_argument("vector field '" + fname + "' needs " +
                                        std::to_string(n) + " components");
        FieldTables ft;
        ft.name = fname;
        ft.X = comps;
        for (const auto& e : comps) ft.X_bound.push_back(bind_slots(e, spec_.coords));

        ft.dX_bound.assign(n, std::vector<Expr>(n));
        for (size_t l = 0; l < n; ++l)
            for (size_t h = 0; h < n; ++h)
                ft.dX_bound[l][h] = bind_slots(diff(comps[h], spec_.coords[l]), spec_.coords);

        // S[i][h] = d_i X^h + Gamma^h_{im} X^m, unbound first so A2 can
        // differentiate it again
        std::vector<std::vector<Expr>> S(n, std::vector<Expr>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t h = 0; h < n; ++h) {
                Expr v = diff(comps[h], spec_.coords[i]);
                for (size_t m = 0; m < n; ++m)
                    v = add(v, mul(gamma_[h][i][m], comps[m]));
                S[i][h] = v;
            }
        ft.S_bound.assign(n, std::vector<Expr>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t h = 0; h < n; ++h) ft.S_bound[i][h] = bind_slots(S[i][h], spec_.coords);

        // A2[i][l][h] = nabla_i S[l][h], S treated as a (1,1) tensor field
        ft.A2_bound.assign(n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l)
                for (size_t h = 0; h < n; ++h) {
                    Expr v = diff(S[l][h], spec_.coords[i]);
                    for (size_t m = 0; m < n; ++m) {
                        v = add(v, mul(gamma_[h][i][m], S[l][m]));
                        v = sub(v, mul(gamma_[m][i][l], S[m][h]));
                    }
                    ft.A2_bound[i][l][h] = bind_slots(v, spec_.coords);
                }
        fields_.push_back(std::move(ft));
    }

    for (const auto& [wname, comps] : spec_.one_forms) {
        if (comps.size() != n)
            throw std::invalid_argument("one-form '" + wname + "' needs " +
                                        std::to_string(n) + " components");
        std::vector<Expr> bound;
        for (const auto& e : comps) bound.push_back(bind_slots(e, spec_.coords));
        forms_bound_.emplace_back(wname, std::move(bound));
    }
}

Mat Manifold::metric_at(std::span<const double> x) const {
    const size_t n = dim();
    Mat m(n, n);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) m(a, b) = eval(g_bound_[a][b], x);
    return m;
}

Mat Manifold::inverse_metric_at(std::span<const double> x) const {
    const size_t n = dim();
    Mat m(n, n);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) m(a, b) = eval(ginv_bound_[a][b], x);
    return m;
}

double Manifold::metric_det_at(std::span<const double> x) const {
    return eval(det_bound_, x);
}

Tensor3 Manifold::christoffel_at(std::span<const double> x) const {
    const size_t n = dim();
    Tensor3 t(n, n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t j = 0; j < n; ++j)
            for (size_t i = 0; i <= j; ++i) {
                double v = eval(gamma_bound_[h][j][i], x);
                t(h, j, i) = v;
                t(h, i, j) = v;
            }
    return t;
}

Tensor4 Manifold::riemann_at(std::span<const double> x) const {
    const size_t n = dim();
    Tensor4 t(n, n, n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j)
                for (size_t i = 0; i < n; ++i)
                    t(h, k, j, i) = eval(riem_bound_[h][k][j][i], x);
    return t;
}

Tensor4 Manifold::riemann_lowered_at(std::span<const double> x) const {
    const size_t n = dim();
    Tensor4 up = riemann_at(x);
    Mat g = metric_at(x);
    Tensor4 low(n, n, n, n);
    for (size_t h = 0; h < n; ++h)
        for (size_t k = 0; k < n; ++k)
            for (size_t j = 0; j < n; ++j)
                for (size_t i = 0; i < n; ++i) {
                    double v = 0.0;
                    for (size_t m = 0; m < n; ++m) v += g(h, m) * up(m, k, j, i);
                    low(h, k, j, i) = v;
                }
    return low;
}

const Manifold::FieldTables& Manifold::field_tables(const std::string& field) const {
    for (const auto& ft : fields_)
        if (ft.name == field) return ft;
    throw std::invalid_argument("unknown vector field '" + field + "'");
}

const std::vector<Expr>& Manifold::field_exprs(const std::string& field) const {
    return field_tables(field).X;
}

std::vector<std::vector<Expr>> Manifold::covariant_derivative_exprs(
    const std::string& field) const {
    const size_t n = dim();
    const auto& X = field_tables(field).X;
    std::vector<std::vector<Expr>> S(n, std::vector<Expr>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t h = 0; h < n; ++h) {
            Expr v = diff(X[h], spec_.coords[i]);
            for (size_t m = 0; m < n; ++m) v = add(v, mul(gamma_[h][i][m], X[m]));
            S[i][h] = v;
        }
    return S;
}

const std::vector<Expr>& Manifold::one_form_exprs(const std::string& form) const {
    for (const auto& [name, comps] : spec_.one_forms)
        if (name == form) return comps;
    throw std::invalid_argument("unknown one-form '" + form + "'");
}

FieldDerivs Manifold::covariant_derivatives_at(const std::string& field,
                                               std::span<const double> x) const {
    const size_t n = dim();
    const auto& ft = field_tables(field);
    FieldDerivs d;
    d.X_up.resize(n);
    for (size_t h = 0; h < n; ++h) d.X_up[h] = eval(ft.X_bound[h], x);

    Mat g = metric_at(x);
    d.X_low.assign(n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t h = 0; h < n; ++h) d.X_low[i] += g(i, h) * d.X_up[h];

    d.partials = Mat(n, n);
    d.S_up = Mat(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t h = 0; h < n; ++h) {
            d.partials(i, h) = eval(ft.dX_bound[i][h], x);
            d.S_up(i, h) = eval(ft.S_bound[i][h], x);
        }

    // nabla_i X_j = g_{jh} nabla_i X^h (lowering commutes with nabla)
    d.S_low = Mat(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double v = 0.0;
            for (size_t h = 0; h < n; ++h) v += g(j, h) * d.S_up(i, h);
            d.S_low(i, j) = v;
        }

    d.A2_up = Tensor3(n, n, n);
    d.A2_low = Tensor3(n, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < n; ++l)
            for (size_t h = 0; h < n; ++h)
                d.A2_up(i, l, h) = eval(ft.A2_bound[i][l][h], x);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < n; ++l)
            for (size_t j = 0; j < n; ++j) {
                double v = 0.0;
                for (size_t h = 0; h < n; ++h) v += g(j, h) * d.A2_up(i, l, h);
                d.A2_low(i, l, j) = v;
            }
    return d;
}

Mat Manifold::killing_residual_base(const std::string& field,
                                    std::span<const double> x) const {
    FieldDerivs d = covariant_derivatives_at(field, x);
    const size_t n = dim();
    Mat r(n, n);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) r(j, i) = d.S_low(j, i) + d.S_low(i, j);
    return r;
}

std::vector<double> Manifold::one_form_at(const std::string& form,
                                          std::span<const double> x) const {
    for (const auto& [name, comps] : forms_bound_) {
        if (name != form) continue;
        std::vector<double> v(comps.size());
        for (size_t i = 0; i < comps.size(); ++i) v[i] = eval(comps[i], x);
        return v;
    }
    throw std::invalid_argument("unknown one-form '" + form + "'");
}

}  // namespace liftcheck
