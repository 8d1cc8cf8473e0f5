#pragma once

#include "specidem/core.hpp"

namespace specidem {

struct DeltaConfig {
    double margin_floor = 1e-6;  ///< min |Re lambda_n - xi|
    double eig_floor = 1e-6;     ///< min |Re mu - xi| over dense eigenvalues
    double cap = 1e6;            ///< cap on the weighted coefficient sums
    bool check_eigenvalues = true;
};

struct DeltaReport {
    double xi = 0.0;
    double margin = 0.0;         ///< min_n |Re lambda_n - xi|
    double wsum_alpha = 0.0;     ///< sum |alpha|^2 / |Re lambda - xi|
    double wsum_beta = 0.0;
    std::optional<double> tail;  ///< certified tail of the weighted sums
    double eig_clearance = 0.0;  ///< dist of Re sigma_p(T) (= Re sigma_p(T*)) to xi
    bool accept = false;
};

/// Membership report for xi against the decomposability set of T.
/// Pass the real parts of the dense eigenvalues to avoid re-solving.
DeltaReport delta_membership(const PerturbedOperator& op, double xi,
                             const DeltaConfig& cfg = {},
                             const RealVec* eig_real_parts = nullptr);

struct DeltaScan {
    std::vector<DeltaReport> reports;
    double accepted_fraction = 0.0;
};

DeltaScan sample_delta(const PerturbedOperator& op, int grid_size,
                       const DeltaConfig& cfg = {});

struct IdempotentDiagnostics {
    double idempotency = 0.0;    ///< ||J^2 - J||
    double commutation = 0.0;    ///< ||J T - T J||
    double quad_error = 0.0;     ///< quadrature error estimate on the integral part
    double C_xi = 1.0;           ///< sup ||(I+YX)^{-1}||^2 along the curve
    double C_hat = 0.0;          ///< empirical contour weight constant
    double M_hat = 0.0;          ///< norm-bound estimate C^2 C_xi (sum_b)(sum_a)
    double core_cond_max = 1.0;  ///< worst core condition seen at the nodes
    long evaluations = 0;
    bool quad_converged = true;
};

struct SpectralIdempotent {
    double xi = 0.0;
    Side side = Side::plus;
    Mat J;
    DeltaReport delta;
    IdempotentDiagnostics diag;
};

struct IdempotentOptions {
    QuadratureConfig quad;
    DeltaConfig delta;
    bool diagnostics = true;  ///< continuity scan, C_hat, M_hat, norm residuals
};

/// J_xi^side by exact diagonal assembly over the enclosed index set plus
/// contour quadrature of the rank-R kernel B(z).
SpectralIdempotent half_plane_idempotent(const PerturbedOperator& op, double xi, Side side,
                                         const IdempotentOptions& opts = {});

struct PairVerification {
    double sum_residual = 0.0;   ///< ||J+ + J- - I||
    double prod_pm = 0.0;        ///< ||J+ J-||
    double prod_mp = 0.0;        ///< ||J- J+||
    double max_idempotency = 0.0;
    int rank_plus = 0;
    int rank_minus = 0;
    bool nontrivial_plus = false;
    bool nontrivial_minus = false;
};

PairVerification verify_pair(const SpectralIdempotent& plus, const SpectralIdempotent& minus,
                             const PerturbedOperator& op);

/// The 90-degree-rotated instance: -iT = D_{-i Lambda} + sum (-i u_k)(x)v_k.
/// Its plus half-plane at xi = y captures Im lambda > y.
PerturbedOperator rotated_operator(const PerturbedOperator& op);

struct RectangleIdempotent {
    Mat J;
    double idempotency = 0.0;
    double commutation = 0.0;       ///< ||J T - T J||
    double factor_commute = 0.0;    ///< worst pairwise factor commutator norm
    std::array<double, 4> factor_idempotency{};
    int rank = 0;
};

/// J_rect = J_{x1}^+ J_{x2}^- Jr_{y1}^+ Jr_{y2}^-, the rotated factors built
/// from -iT. Throws if any factor fails its own verification.
RectangleIdempotent rectangle_idempotent(const PerturbedOperator& op, double x1, double x2,
                                         double y1, double y2,
                                         const IdempotentOptions& opts = {});

}  // namespace specidem
