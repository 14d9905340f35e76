#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liftcheck/bundle.hpp"
#include "liftcheck/linalg.hpp"
#include "liftcheck/manifold.hpp"
#include "liftcheck/oracle.hpp"

namespace liftcheck {

// Shared point data for the specialized lift formulas. Index conventions:
// rows of S/A2y/P/Q/C are the free lower index; curvature contractions are
// against the first lower slot of R^h_{kji} with y.
struct LiftIngredients {
    size_t n = 0;
    std::vector<double> y;
    std::vector<double> X_up, X_low;
    std::vector<double> nX_up, nX_low;  // y^l nabla_l X^h, y^l nabla_l X_i
    Mat S_up, S_low;                    // (i, h), (i, j)
    Tensor3 A2_up, A2_low;              // (i, l, h), (i, l, j)
    Mat A2y_up, A2y_low;                // (i, h), (i, j): y^l contraction of A2
    Mat P, Q;    // P(i,j) = y^s R^h_{sij} X_h; Q = P^T (slots j,i swapped)
    Mat PD, QD;  // same with y^l nabla_l X in place of X
    Mat C_mid;   // (i, h) = y^s R^h_{sji} X^j   (X on the middle slot)
    Mat C_last;  // (i, h) = y^s R^h_{sij} X^j   (X on the last slot)
    Mat CD_mid;  // (i, h) = y^s R^h_{sji} (y^l nabla_l X^j)
};

LiftIngredients lift_ingredients(const Manifold& m, const std::string& field,
                                 const BundlePoint& q);

// Covariant derivative of a lift in the adapted frame, rows = direction,
// columns = component (mixed variance).
Block2Tensor cov_deriv_lift(const Manifold& m, const std::string& field,
                            LiftKind kind, const BundlePoint& q);

// Antisymmetrized / symmetrized covariant derivative of the associated
// covector: the rotation and the metric Lie derivative along the lift.
Block2Tensor rotation_lift(const Manifold& m, const std::string& field,
                           LiftKind kind, const BundlePoint& q);
Block2Tensor lie_derivative_lift(const Manifold& m, const std::string& field,
                                 LiftKind kind, const BundlePoint& q);

// The complete-lift Lie derivative's upper-left block also circulates in an
// unsymmetrized single-line form; it differs from the true block whenever
// the curvature terms matter, so both are exposed and reported.
Mat lie_complete_upper_left_unsymmetrized(const LiftIngredients& in);

// Residuals of the second-derivative exchange identities for a Killing
// field, y-contracted:
//   circulated: y^l nabla_i nabla_l X_j + (P + Q)_ij
//   single_term: y^l nabla_i nabla_l X_j - Q_ij
//   symmetrized: (A2y + A2y^T - (P + Q))_ij
// For a base Killing field the last two vanish; the first does not.
struct KillingIdentityResiduals {
    double circulated;
    double single_term;
    double symmetrized;
};
KillingIdentityResiduals killing_identity_residuals(const LiftIngredients& in);

// Direct frame assembly nabla_gamma X^alpha = D_gamma X^alpha
// + Gt^alpha_{gamma beta} X^beta evaluated from compiled expression tables;
// the in-module cross-check for the specialized blocks above.
class GenericDerivativeEngine {
public:
    explicit GenericDerivativeEngine(const Manifold& m);

    Block2Tensor vector_assembly(const std::string& field, LiftKind kind,
                                 const BundlePoint& q) const;
    // unsymmetrized covariant derivative of the associated covector
    Block2Tensor covector_assembly(const std::string& field, LiftKind kind,
                                   const BundlePoint& q) const;

private:
    struct Tables {
        std::string field;
        LiftKind kind;
        std::vector<Expr> vec;                   // 2n adapted components
        std::vector<std::vector<Expr>> dvec;     // [C][comp] bundle partials
        std::vector<Expr> cov;                   // 2n associated covector comps
        std::vector<std::vector<Expr>> dcov;
    };
    const Tables& tables(const std::string& field, LiftKind kind) const;

    const Manifold* m_;
    size_t n_;
    std::vector<std::vector<Expr>> gy_;  // bound G^h_i for the frame derivative
    std::vector<Tables> tables_;
};

struct ClosednessReport {
    std::string field;
    double antisym_residual = 0.0;  // max |nabla_i X_j - nabla_j X_i| over base points
    double second_residual = 0.0;   // max |nabla_i nabla_l X_j|
    double rotation_max = 0.0;      // max over complete-lift rotation blocks
    double block_max[2][2] = {};    // per-block maxima of the rotation
    bool conditions_hold = false;
    bool closed_on_samples = false;
    bool implication_consistent = false;  // conditions => closed at sample resolution
    double threshold = 0.0;
};

ClosednessReport closedness_check(const Manifold& m, const std::string& field,
                                  const std::vector<BundlePoint>& samples);

struct LiftAnalysis {
    std::string field;
    LiftKind kind;
    // per-sample max-abs of each equation family, then per-block summaries
    std::vector<double> cov_deriv_per_point;
    std::vector<double> lie_per_point;
    double cov_deriv_max = 0.0, rotation_max = 0.0, lie_max = 0.0;
    double cov_block_max[2][2] = {};
    double lie_block_max[2][2] = {};
    double cov_two_engine_dev = 0.0;  // vs oracle coordinate covariant derivative
    double lie_two_engine_dev = 0.0;  // vs oracle coordinate Lie derivative
    size_t cov_witness = 0, lie_witness = 0;  // sample indices of the maxima
};

struct TheoremAudit {
    std::string id;           // "T1" | "T2a" | "T2b"
    std::string field;
    std::string lift;         // lift kind the audit concerns
    bool base_killing = false;
    bool base_parallel = false;
    bool base_second_zero = false;
    double base_killing_res = 0.0, base_parallel_res = 0.0, base_second_res = 0.0;
    bool hypothesis = false;       // the stated base-side condition
    bool conclusion = false;       // the measured bundle-side property
    double conclusion_res = 0.0;
    double two_engine_dev = 0.0;   // independent confirmation of conclusion_res
    double threshold = 0.0;        // zero-predicate cut used for the flags
    std::string verdict;           // consistent | counterexample-candidate | engines-disagree
    std::vector<double> witness_x, witness_y;
};

struct Classification {
    std::string field;
    double base_killing_res = 0.0, base_parallel_res = 0.0, base_second_res = 0.0,
           base_closed_res = 0.0;
    bool base_killing = false, base_parallel = false, base_second_zero = false,
         base_closed = false;
    double threshold = 0.0;
    KillingIdentityResiduals identity{};  // maxima over samples
    std::vector<LiftAnalysis> lifts;      // vertical, complete, horizontal
    std::vector<TheoremAudit> audits;     // T1 x3, T2a, T2b
};

// Measures every lift equation for one field over shared samples and audits
// the parallelism and Killing statements; never assumes a statement's truth,
// only records measured consistency or a two-engine counterexample-candidate.
Classification classify_field(const Manifold& m, const Oracle& oracle,
                              const std::string& field,
                              const std::vector<BundlePoint>& samples);

}  // namespace liftcheck
