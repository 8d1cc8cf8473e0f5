#include "specidem/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace specidem::oracle {

EigenSystem dense_eig(const Mat& T, int dim_cap) {
    const int N = static_cast<int>(T.rows());
    if (N > dim_cap) throw Error("dense_eig: dimension exceeds cap");
    Eigen::ComplexEigenSolver<Mat> es(T);
    if (es.info() != Eigen::Success) throw Error("dense_eig: eigensolver did not converge");

    EigenSystem sys;
    sys.values = es.eigenvalues();
    sys.right = es.eigenvectors();
    // Left eigenvectors from the inverse of the right eigenvector matrix:
    // T = V diag(mu) V^{-1}, so rows of V^{-1} are l_i^H with l_i^H r_i = 1.
    Mat Vinv = sys.right.partialPivLu().solve(Mat::Identity(N, N));
    sys.left = Vinv.adjoint();
    sys.normalization = Vec::Ones(N);

    sys.min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            sys.min_gap = std::min(sys.min_gap, std::abs(sys.values[i] - sys.values[j]));
    if (N < 2) sys.min_gap = std::numeric_limits<double>::infinity();
    sys.near_defective = sys.min_gap < 1e-10;

    const double tnorm = std::max(1e-300, T.norm());
    for (int i = 0; i < N; ++i) {
        const double r = (T * sys.right.col(i) - sys.values[i] * sys.right.col(i)).norm();
        sys.max_residual = std::max(sys.max_residual, r / tnorm);
    }
    return sys;
}

Mat riesz_projector(const EigenSystem& sys, const std::function<bool(Complex)>& region) {
    if (sys.near_defective) throw Error("riesz_projector: near-defective eigensystem refused");
    const int N = static_cast<int>(sys.values.size());
    Mat P = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i)
        if (region(sys.values[i]))
            P += sys.right.col(i) * sys.left.col(i).adjoint() / sys.normalization[i];
    return P;
}

Mat riesz_contour(const Mat& T, const HalfPlaneContour& contour, const QuadratureConfig& cfg) {
    const int N = static_cast<int>(T.rows());
    auto res = integrate(
        [&](Complex z) -> Mat {
            return (T - z * Mat::Identity(N, N)).partialPivLu().solve(Mat::Identity(N, N));
        },
        contour, cfg);
    return -res.value / Complex(0.0, 2.0 * std::numbers::pi);
}

Mat riesz_contour_fixed(const Mat& T, const HalfPlaneContour& contour, int order, int depth) {
    const int N = static_cast<int>(T.rows());
    auto res = integrate_fixed(
        [&](Complex z) -> Mat {
            return (T - z * Mat::Identity(N, N)).partialPivLu().solve(Mat::Identity(N, N));
        },
        contour, order, depth);
    return -res.value / Complex(0.0, 2.0 * std::numbers::pi);
}

std::vector<Mat> commutant_basis(const EigenSystem& sys) {
    if (sys.near_defective) throw Error("commutant_basis: near-defective eigensystem refused");
    const int N = static_cast<int>(sys.values.size());
    std::vector<Mat> basis;
    basis.reserve(N);
    for (int i = 0; i < N; ++i)
        basis.push_back(sys.right.col(i) * sys.left.col(i).adjoint() / sys.normalization[i]);
    return basis;
}

int numerical_rank(const Mat& m, double tol) {
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= tol) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++r;
    return r;
}

}  // namespace specidem::oracle
