#pragma once

#include <string>
#include <vector>

#include "liftcheck/bundle.hpp"
#include "liftcheck/linalg.hpp"
#include "liftcheck/manifold.hpp"

namespace liftcheck {

// Ground-truth engine: recomputes every bundle-level quantity from first
// principles in induced coordinates. It builds its own expression tables for
// the bundle metric, the frame matrices, and the induced lift components,
// and never touches the adapted-frame formula assemblies it is used to
// check. Construction compiles all tables; evaluation is pure and safe to
// run concurrently over sample points.
class Oracle {
public:
    explicit Oracle(const Manifold& m);

    const Manifold& manifold() const { return *m_; }

    // bundle metric in induced coordinates from the oracle's own tables
    Mat induced_metric_at(const BundlePoint& q) const;

    // Christoffel symbols of the 2n-dimensional bundle metric, indexed
    // (A, B, C), symmetric in (B, C); partials are exact, the matrix
    // inverse is numeric at the point
    Tensor3 levi_civita_induced(const BundlePoint& q) const;

    // anholonomic change of connection into the adapted frame:
    // Gt^a_{gb} = D^a_C (e_g(F^C_b) + F^A_g F^B_b G^C_{AB})
    BundleConnection connection_to_adapted(const BundlePoint& q,
                                           const Tensor3& induced) const;

    // inverse transform, back to coordinate components:
    // G^C_{AB} = F^C_a (d_A D^a_B + D^g_A D^b_B Gt^a_{gb})
    Tensor3 connection_to_induced(const BundlePoint& q,
                                  const BundleConnection& adapted) const;

    // connection-free coordinate Lie derivative of the bundle metric along
    // the induced lift components:
    // (L g)_AB = X^C d_C g_AB + g_CB d_A X^C + g_AC d_B X^C
    Block2Tensor lie_derivative_induced(const std::string& field, LiftKind kind,
                                        const BundlePoint& q) const;

    // induced lift components from the oracle's own tables (cross-check data)
    BlockVector induced_lift(const std::string& field, LiftKind kind,
                             const BundlePoint& q) const;

    // covariant 2-tensor frame changes: T_ab = F^A_a F^B_b T_AB and back
    Block2Tensor to_adapted_cov2(const BundlePoint& q, const Block2Tensor& induced) const;
    Block2Tensor to_induced_cov2(const BundlePoint& q, const Block2Tensor& adapted) const;

    // coordinate covariant derivative of the lift, rows = direction A:
    // T_A^C = d_A X^C + G^C_{AB} X^B, from the oracle's own tables only
    Mat cov_deriv_induced(const std::string& field, LiftKind kind,
                          const BundlePoint& q) const;

    // mixed (direction, component) frame change: T_g^a = F^A_g D^a_C T_A^C
    Block2Tensor to_adapted_mixed(const BundlePoint& q, const Mat& induced) const;

    // Recomputes `quantity` ("christoffel", "riemann", "levi_civita_induced")
    // with every symbolic partial replaced by a central difference of step h
    // and returns the max-abs deviation from the symbolic value. Throws if
    // h is outside [1e-7, 1e-3] or the stencil leaves the sampling domain.
    double finite_difference_audit(const std::string& quantity,
                                   const BundlePoint& q, double h) const;

private:
    struct LiftTables {
        std::string field;
        LiftKind kind;
        std::vector<Expr> comp;               // 2n components, bound to (x, y)
        std::vector<std::vector<Expr>> dcomp; // [C][A] partials
    };

    Mat frame_at(const BundlePoint& q) const;
    Mat dual_at(const BundlePoint& q) const;
    const LiftTables& lift_tables(const std::string& field, LiftKind kind) const;

    const Manifold* m_;
    size_t n_;

    std::vector<std::vector<Expr>> gt_;                // 2n x 2n, bound
    std::vector<std::vector<std::vector<Expr>>> dgt_;  // [C][A][B]
    std::vector<std::vector<Expr>> gy_;                // [h][i], bound
    std::vector<std::vector<std::vector<Expr>>> dgy_;  // [C][h][i]
    std::vector<LiftTables> lifts_;
};

}  // namespace liftcheck
