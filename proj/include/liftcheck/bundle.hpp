#pragma once

#include <array>
#include <string>
#include <vector>

#include "liftcheck/linalg.hpp"
#include "liftcheck/manifold.hpp"

namespace liftcheck {

// Tangent-bundle values live either in induced coordinates (x, y) or in
// the adapted frame {e_i = d_xi - G^h_i d_yh, e_ibar = d_yi}. Values carry
// their frame so mix-ups fail loudly instead of producing near-miss numbers.

enum class Frame { Induced, Adapted };
enum class Variance { Covariant, Contravariant, Mixed };
enum class LiftKind { Vertical, Complete, Horizontal };

const char* frame_name(Frame f);
const char* variance_name(Variance v);
const char* lift_kind_name(LiftKind k);
LiftKind lift_kind_from_name(const std::string& s);  // throws on unknown

struct BundlePoint {
    std::vector<double> x;  // base coordinates
    std::vector<double> y;  // fiber coordinates
    std::vector<double> xy() const;  // concatenated, for 2n-coordinate tables
};

struct FrameMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlockVector {
    Frame frame;
    Variance variance;
    std::vector<double> u;  // unbarred block
    std::vector<double> b;  // barred block

    void require(Frame f, Variance v, const std::string& where) const;
    std::vector<double> full() const;  // u followed by b
    double max_abs() const;
};

// Four n x n blocks of a 2-tensor; indices are (first, second) with the
// first index selecting the row block. For derivative-style tensors the
// first index is the differentiation direction.
struct Block2Tensor {
    Frame frame;
    Variance variance;
    Mat uu, ub, bu, bb;

    void require(Frame f, Variance v, const std::string& where) const;
    Mat full() const;  // 2n x 2n assembly
    static Block2Tensor from_full(const Mat& m, Frame f, Variance v);
    double max_abs() const;
    double max_block_abs(int first_barred, int second_barred) const;
};

// transpose within each index pair: uu^T, bb^T, ub <-> bu^T
Block2Tensor block_transpose(const Block2Tensor& t);
Block2Tensor block_add(const Block2Tensor& a, const Block2Tensor& b);
Block2Tensor block_sub(const Block2Tensor& a, const Block2Tensor& b);

// Adapted-frame Levi-Civita coefficients of the bundle metric.
// coeff[upper_barred][dir_barred][lower_barred](h, j, i) holds the value
// with upper index partner h, direction partner j, lower partner i.
// Both all-barred-lower patterns are identically zero.
struct BundleConnection {
    size_t n = 0;
    std::array<std::array<std::array<Tensor3, 2>, 2>, 2> coeff;

    static BundleConnection zeros(size_t n);
    double max_abs() const;
};

// frame matrix F (columns are the adapted frame vectors in induced
// components) and dual matrix D (rows are the adapted coframe), D * F = I
struct AdaptedFrame {
    Mat frame;  // F[A][alpha]
    Mat dual;   // D[alpha][A]
};

AdaptedFrame adapted_frame_at(const Manifold& m, const BundlePoint& q);

// G^h_i = y^j Gamma^h_{ji}
Mat gamma_y_at(const Manifold& m, const BundlePoint& q);

// adapted blocks ((0, g), (g, g))
Block2Tensor metric_adapted_at(const Manifold& m, const BundlePoint& q);
// adapted blocks ((-g^-1, g^-1), (g^-1, 0))
Block2Tensor metric_adapted_inv_at(const Manifold& m, const BundlePoint& q);

// induced components: gt_ab = g_aj G^j_b + g_bj G^j_a + g_ij G^i_a G^j_b,
// gt_abbar = g_ab + g_jb G^j_a, gt_abarbbar = g_ab
Block2Tensor metric_induced_at(const Manifold& m, const BundlePoint& q);

BundleConnection bundle_connection_at(const Manifold& m, const BundlePoint& q);

BlockVector lift_vector(const Manifold& m, const std::string& field, LiftKind kind,
                        const BundlePoint& q, Frame frame);

// induced components of the three lifts of a declared 1-form:
// vertical (w_i, 0), complete (y^l d_l w_i, w_i), horizontal (-G^k_i w_k, w_i)
BlockVector lift_oneform(const Manifold& m, const std::string& form, LiftKind kind,
                         const BundlePoint& q);

// adapted components of the metric-lowered lift: vertical (X_i, X_i),
// complete (nX_i, X_i + nX_i), horizontal (0, X_i), nX_i = y^l nabla_l X_i
BlockVector associated_covector(const Manifold& m, const std::string& field,
                                LiftKind kind, const BundlePoint& q);

// lower a contravariant adapted BlockVector with the adapted metric blocks
BlockVector lower_with_metric(const Block2Tensor& metric, const BlockVector& v);

}  // namespace liftcheck
