#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "liftcheck/expr.hpp"
#include "liftcheck/linalg.hpp"

namespace liftcheck {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Chart description of a Riemannian manifold: coordinates, closed-form
// metric entries, named fields, and the sampling box. Loaded from a spec
// file (see specfile.hpp) or built directly in tests.
struct ManifoldSpec {
    std::string name;
    size_t dim = 0;
    std::vector<std::string> coords;
    // full symmetric matrix; loaders complete the upper triangle
    std::vector<std::vector<Expr>> metric;
    // insertion order preserved for deterministic reports
    std::vector<std::pair<std::string, std::vector<Expr>>> vector_fields;
    std::vector<std::pair<std::string, std::vector<Expr>>> one_forms;
    std::vector<Interval> domain;  // per base coordinate
    Interval fiber;                // applied to every fiber coordinate

    const std::vector<Expr>* find_vector_field(const std::string& n) const;
    const std::vector<Expr>* find_one_form(const std::string& n) const;
};

using Point = std::vector<double>;

// First and second covariant derivatives of one vector field at a point,
// plus the lowered copies every bundle formula consumes.
struct FieldDerivs {
    std::vector<double> X_up;   // X^h
    std::vector<double> X_low;  // X_i = g_{ih} X^h
    Mat partials;               // [l][h] = d_l X^h (plain partials)
    Mat S_up;                   // [i][h] = nabla_i X^h
    Mat S_low;                  // [i][j] = nabla_i X_j
    Tensor3 A2_up;              // [i][l][h] = nabla_i nabla_l X^h
    Tensor3 A2_low;             // [i][l][j] = g_{jh} A2_up[i][l][h]
};

// Compiles every tensor table of a chart to bound expression trees once,
// then evaluates them at points. Derivatives are exact symbolic ones; the
// only numeric linear algebra on the base manifold is plain contraction.
class Manifold {
public:
    explicit Manifold(ManifoldSpec spec);

    const ManifoldSpec& spec() const { return spec_; }
    size_t dim() const { return spec_.dim; }
    const std::vector<std::string>& coords() const { return spec_.coords; }
    // fiber coordinate names: "y_" + base coordinate name
    const std::vector<std::string>& fiber_coords() const { return fiber_coords_; }
    // base coordinates followed by fiber coordinates
    const std::vector<std::string>& bundle_coords() const { return bundle_coords_; }

    Mat metric_at(std::span<const double> x) const;
    Mat inverse_metric_at(std::span<const double> x) const;
    double metric_det_at(std::span<const double> x) const;

    // Gamma^h_{ji}, indexed (h, j, i); symmetric in (j, i)
    Tensor3 christoffel_at(std::span<const double> x) const;

    // R^h_{kji} = d_k Gamma^h_{ji} - d_j Gamma^h_{ki}
    //           + Gamma^h_{km} Gamma^m_{ji} - Gamma^h_{jm} Gamma^m_{ki},
    // indexed (h, k, j, i); antisymmetric in (k, j)
    Tensor4 riemann_at(std::span<const double> x) const;

    // R_{hkji} = g_{hm} R^m_{kji}
    Tensor4 riemann_lowered_at(std::span<const double> x) const;

    FieldDerivs covariant_derivatives_at(const std::string& field,
                                         std::span<const double> x) const;

    // nabla_j X_i + nabla_i X_j
    Mat killing_residual_base(const std::string& field,
                              std::span<const double> x) const;

    std::vector<double> one_form_at(const std::string& form,
                                    std::span<const double> x) const;

    // Unbound expression tables, for modules that compose them with fiber
    // symbols before binding (bundle frame matrices, induced-metric oracle).
    const std::vector<std::vector<Expr>>& metric_exprs() const { return g_; }
    const std::vector<std::vector<Expr>>& inverse_metric_exprs() const { return ginv_; }
    const std::vector<std::vector<std::vector<Expr>>>& christoffel_exprs() const { return gamma_; }
    const std::vector<Expr>& field_exprs(const std::string& field) const;
    std::vector<std::vector<Expr>> covariant_derivative_exprs(const std::string& field) const;
    const std::vector<Expr>& one_form_exprs(const std::string& form) const;

private:
    struct FieldTables {
        std::string name;
        std::vector<Expr> X;                            // unbound
        std::vector<Expr> X_bound;
        std::vector<std::vector<Expr>> dX_bound;        // [l][h]
        std::vector<std::vector<Expr>> S_bound;         // [i][h]
        std::vector<std::vector<std::vector<Expr>>> A2_bound;  // [i][l][h]
    };

    const FieldTables& field_tables(const std::string& field) const;

    ManifoldSpec spec_;
    std::vector<std::string> fiber_coords_;
    std::vector<std::string> bundle_coords_;

    // unbound symbolic tables
    std::vector<std::vector<Expr>> g_;
    std::vector<std::vector<Expr>> ginv_;
    Expr det_;
    std::vector<std::vector<std::vector<Expr>>> gamma_;             // [h][j][i]
    std::vector<std::vector<std::vector<std::vector<Expr>>>> riem_; // [h][k][j][i]

    // the same tables bound to base coordinate slots
    std::vector<std::vector<Expr>> g_bound_, ginv_bound_;
    Expr det_bound_;
    std::vector<std::vector<std::vector<Expr>>> gamma_bound_;
    std::vector<std::vector<std::vector<std::vector<Expr>>>> riem_bound_;

    std::vector<FieldTables> fields_;
    std::vector<std::pair<std::string, std::vector<Expr>>> forms_bound_;
};

// Symbolic inverse of a small symmetric expression matrix via the adjugate.
// Returns {inverse, determinant}. Practical for chart dimensions (n <= 4).
std::pair<std::vector<std::vector<Expr>>, Expr> symbolic_inverse(
    const std::vector<std::vector<Expr>>& m);

}  // namespace liftcheck
