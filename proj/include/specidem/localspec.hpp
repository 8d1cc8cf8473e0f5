#pragma once

#include "specidem/idempotent.hpp"

namespace specidem {

/// Gamma(g)(z, w): divided difference, central finite difference at z = w.
Complex divided_difference(const std::function<Complex(Complex)>& g, Complex z, Complex w,
                           double fd_step = 1e-6);

/// Samples the certificate functions
///   g_k(z) = (1/2 pi i) int [ sum_j y_j/(lambda_j - xi')
///            (sum_m conj(beta_j^{(m)}) a_{k,m}(xi')) ] / (z - xi') dxi'
/// on a refined fixed node set along gamma_xi^side, caching the per-node
/// core solves so g, Gamma(g) and the local resolvent are cheap per point.
class CertificateEvaluator {
public:
    CertificateEvaluator(const PerturbedOperator& op, const Vec& y, double xi, Side side,
                         int order = 16, int depth = 5);

    int rank() const { return R_; }
    double xi() const { return xi_; }
    Side side() const { return side_; }
    const std::vector<int>& inside_indices() const { return inside_; }    ///< N_F
    const std::vector<int>& outside_indices() const { return outside_; }  ///< N_{F^c}
    double node_clearance(Complex z) const;
    /// max over nodes and k of |c_k(xi')|, for ML-type bounds on g.
    double sup_density() const;

    /// g_k(z) for all k.
    Vec g(Complex z) const;
    /// Gamma(g_k)(z, lambda) via the contour representation (valid at z = lambda).
    Complex gamma(int k, Complex z, Complex lambda) const;
    /// sum_{n in N_{F^c}} ( sum_k Gamma(g_k)(z, lambda_n) alpha_n^{(k)} ) e_n.
    Vec projected_tail(Complex z) const;
    /// Local resolvent candidate f_x(z) assembled from the sampled g.
    Vec local_resolvent(const Vec& x, Complex z) const;

private:
    const PerturbedOperator& op_;
    double xi_;
    Side side_;
    int R_;
    std::vector<int> inside_, outside_;
    std::vector<Complex> nodes_;    // xi' samples
    std::vector<Complex> weights_;  // quadrature weight * dz
    Mat c_;                         // nodes x R: c_k(xi') = (M^{-1} beta^H (D-xi')^{-1} y)_k
    Mat s_;                         // nodes x N: sum_k c_k(xi') alpha_n^{(k)}
};

struct CertificateConfig {
    double pass_tolerance = 1e-6;   ///< residual level for certified membership
    double fail_threshold = 1e-4;   ///< calibrated separation threshold
    double cap = 1e6;               ///< condition (iv) cap
    double cr_step = 1e-6;          ///< Cauchy-Riemann finite-difference step
    double grid_clearance = 0.05;
    int circle_points = 32;         ///< per outer circle (two circles)
    int interior_points = 32;
};

struct Certificate {
    double res_condition_i = 0.0;
    double res_condition_ii = 0.0;   ///< Cauchy-Riemann defect of the projected series
    double res_condition_iii = 0.0;
    double condition_iv_sup = 0.0;   ///< sup over grid of the squared-coefficient series
    double res_resolvent = 0.0;      ///< max ||(T - z) f_x(z) - x|| / ||x||
    double overall = 0.0;            ///< max of (i), (iii), resolvent
    bool pass = false;
    bool fail = false;  ///< overall above the calibrated threshold
};

/// z grid in F^c: points on circles of radii 1.5 and 3 plus interior points
/// of F^c within the closed disc, all clear of the curve and of Lambda.
std::vector<Complex> certificate_grid(const PerturbedOperator& op, double xi, Side side,
                                      const CertificateConfig& cfg = {});

Certificate check_membership(const PerturbedOperator& op, const Vec& x,
                             const CertificateEvaluator& ev,
                             const std::vector<Complex>& grid,
                             const CertificateConfig& cfg = {});

struct TwoPointReport {
    DeltaReport at_x1, at_x2;
    bool gates_pass = false;
    int rank_plus_x2 = 0;        ///< rank of J_{x2}^+ for T
    int adjoint_rank_minus_x1 = 0;  ///< rank of the adjoint-side J_{x1}^-
    bool nondense_proxy = false;  ///< rank(J_{x2}^+) < N and adjoint rank > 0
};

/// The two-abscissa local test: gate the weighted sums at x1 < x2, then build
/// J_{x2}^+ for T and J_{x1}^- for the adjoint instance.
TwoPointReport local_two_point_test(const PerturbedOperator& op, double x1, double x2,
                                    const IdempotentOptions& opts = {});

}  // namespace specidem
