#pragma once

#include "specidem/contour.hpp"
#include "specidem/model.hpp"

namespace specidem {

/// f_T^{(i,j)}(z) = sum_n alpha_n^{(i)} conj(beta_n^{(j)}) / (lambda_n - z),
/// summed over n = 1..N in index order. i, j are 0-based column indices.
Complex borel_series(const PerturbedOperator& op, int i, int j, Complex z);

/// X(z) c = sum_k c_k (D - z)^{-1/2} u_k  (c has R entries).
Vec apply_X(const PerturbedOperator& op, Complex z, const Vec& c);
/// (Y(z) x)_k = sum_n x_n conj(beta_n^{(k)}) / principal_sqrt(lambda_n - z).
Vec apply_Y(const PerturbedOperator& op, Complex z, const Vec& x);

/// I + Y(z)X(z) restricted to the R perturbation directions. Entry
/// (row n, col k) = delta_{k,n} + f_T^{(k,n)}(z).
struct CoreMatrix {
    Complex z;
    Mat entries;  // R x R
    double condition = 1.0;
};

CoreMatrix assemble_core(const PerturbedOperator& op, Complex z);

/// a_{i,j}(z) = < (I+YX)^{-1} e_j, e_i >, i.e. the (i,j) entry of the inverse.
struct CoreInverse {
    Complex z;
    Mat a;              // R x R
    double norm = 1.0;  ///< spectral norm of the inverse (feeds C_xi)
    double condition = 1.0;
};

CoreInverse invert_core(const CoreMatrix& core, double condition_cap = 1e12);

/// max_n |sum_{k,j} x_j a_{k,j}(z) (delta_{k,n} + f^{(k,n)}(z)) - x_n| / (1 + ||x||).
double cofactor_identity_residual(const PerturbedOperator& op, Complex z, const Vec& x);

/// R(z) x = (D-z)^{-1} x - B(z) x with
/// B(z) = sum_{i,j} a_{i,j}(z) (D-z)^{-1} u_i (x) (D*-zbar)^{-1} v_j.
Vec formal_resolvent_apply(const PerturbedOperator& op, Complex z, const Vec& x);

/// || (I + XY)(I - X (I+YX)^{-1} Y) - I || on the truncation.
double woodbury_residual(const PerturbedOperator& op, Complex z);

/// T~ = (D - xi) + sum_k ((D-xi)^{-1/2} u_k) (x) (((D-xi)^{1/2})^* v_k),
/// with the two intertwining residuals
///   (T - xi)(D - xi)^{1/2} = (D - xi)^{1/2} T~ ,  U (T - xi) = T~ U
/// where U = (D - xi)^{-1/2} (T - xi). Residuals are relative spectral norms.
struct SymmetrizedOperator {
    Mat T_tilde;
    double residual_right = 0.0;
    double residual_left = 0.0;
};

SymmetrizedOperator symmetrized_operator(const PerturbedOperator& op, Complex xi_point);

/// Samples ||(I+YX)^{-1}|| along the curve on a refinement ladder.
struct ContinuityScan {
    double sup_norm = 1.0;  ///< sup ||A(z)|| over all samples
    double C_xi = 1.0;      ///< sup ||A(z)||^2
    std::vector<double> sup_per_level;
    bool cauchy_ok = true;  ///< refinement changed the sup by <= 1% at the last rung
};

ContinuityScan continuity_scan(const PerturbedOperator& op, const HalfPlaneContour& contour,
                               int levels = 4, int base_samples_per_panel = 8);

}  // namespace specidem
