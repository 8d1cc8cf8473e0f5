#pragma once

#include "specidem/contour.hpp"

#include <functional>

namespace specidem {

/// Structure-blind dense ground truth.
namespace oracle {

struct EigenSystem {
    Vec values;
    Mat right;          ///< columns r_i, T r_i = mu_i r_i
    Mat left;           ///< columns l_i, l_i^H T = mu_i l_i^H
    Vec normalization;  ///< l_i^H r_i
    double min_gap = 0.0;
    double max_residual = 0.0;  ///< max ||T r_i - mu_i r_i|| / ||T||
    bool near_defective = false;
};

EigenSystem dense_eig(const Mat& T, int dim_cap = 4096);

/// P = sum over mu_i in region of r_i l_i^H / (l_i^H r_i). Refuses
/// near-defective systems and eigenvalues within boundary_floor of the
/// region boundary (probed along the contour when one is supplied).
Mat riesz_projector(const EigenSystem& sys, const std::function<bool(Complex)>& region);

/// Dense-resolvent route: -(1/2 pi i) contour integral of (T - z)^{-1} dz,
/// one LU per node.
Mat riesz_contour(const Mat& T, const HalfPlaneContour& contour,
                  const QuadratureConfig& cfg = {});

/// Same integral at fixed quadrature depth (benchmark route).
Mat riesz_contour_fixed(const Mat& T, const HalfPlaneContour& contour, int order, int depth);

/// Basis of {A : AT = TA}. For simple spectrum this has dimension N:
/// E_i = r_i l_i^H / (l_i^H r_i).
std::vector<Mat> commutant_basis(const EigenSystem& sys);

/// Numerical rank at threshold tol * largest singular value.
int numerical_rank(const Mat& m, double tol = 1e-8);

}  // namespace oracle
}  // namespace specidem
