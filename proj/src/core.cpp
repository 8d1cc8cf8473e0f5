#include "specidem/core.hpp"

#include <Eigen/SVD>

namespace specidem {

namespace {
constexpr double kCollisionFloor = 1e-13;

void check_off_spectrum(const PerturbedOperator& op, Complex z) {
    for (int n = 0; n < op.dim(); ++n)
        if (std::abs(op.spectrum.lambdas[n] - z) < kCollisionFloor)
            throw Error("evaluation point collides with lambda_" + std::to_string(n + 1));
}

double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}
}  // namespace

Complex borel_series(const PerturbedOperator& op, int i, int j, Complex z) {
    if (i < 0 || i >= op.rank() || j < 0 || j >= op.rank())
        throw Error("borel_series: coefficient index out of range");
    check_off_spectrum(op, z);
    Complex acc = 0.0;
    for (int n = 0; n < op.dim(); ++n)
        acc += op.coeffs.alpha(n, i) * std::conj(op.coeffs.beta(n, j)) /
               (op.spectrum.lambdas[n] - z);
    return acc;
}

Vec apply_X(const PerturbedOperator& op, Complex z, const Vec& c) {
    if (c.size() != op.rank()) throw Error("apply_X: coefficient vector has wrong length");
    const Vec s = diag_power(op.spectrum, z, HalfPower::minus_half);
    return s.cwiseProduct(op.coeffs.alpha * c);
}

Vec apply_Y(const PerturbedOperator& op, Complex z, const Vec& x) {
    if (x.size() != op.dim()) throw Error("apply_Y: vector has wrong length");
    const Vec s = diag_power(op.spectrum, z, HalfPower::minus_half);
    return op.coeffs.beta.adjoint() * s.cwiseProduct(x);
}

CoreMatrix assemble_core(const PerturbedOperator& op, Complex z) {
    check_off_spectrum(op, z);
    const int R = op.rank();
    CoreMatrix core;
    core.z = z;
    const Vec dinv = R > 0 ? diag_power(op.spectrum, z, HalfPower::minus_one) : Vec();
    core.entries = Mat::Identity(R, R);
    if (R > 0)
        core.entries += op.coeffs.beta.adjoint() * dinv.asDiagonal() * op.coeffs.alpha;
    if (R > 0) {
        Eigen::JacobiSVD<Mat> svd(core.entries);
        const double smin = svd.singularValues()(R - 1);
        core.condition = smin > 0.0 ? svd.singularValues()(0) / smin
                                    : std::numeric_limits<double>::infinity();
    }
    return core;
}

CoreInverse invert_core(const CoreMatrix& core, double condition_cap) {
    if (core.condition > condition_cap)
        throw Error("invert_core: core matrix condition " + std::to_string(core.condition) +
                    " exceeds cap (curve effectively touching the point spectrum)");
    const int R = static_cast<int>(core.entries.rows());
    CoreInverse inv;
    inv.z = core.z;
    inv.condition = core.condition;
    inv.a = core.entries.partialPivLu().solve(Mat::Identity(R, R));
    // norm of (I+YX)^{-1} as an operator on H: identity off the R block.
    inv.norm = std::max(1.0, spectral_norm(inv.a));
    return inv;
}

double cofactor_identity_residual(const PerturbedOperator& op, Complex z, const Vec& x) {
    if (x.size() != op.dim()) throw Error("cofactor_identity_residual: wrong vector length");
    const int R = op.rank();
    const CoreInverse inv = invert_core(assemble_core(op, z));
    const int Rn = std::min<int>(R, op.dim());
    Vec w = inv.a * x.head(Rn);
    // Borel series recomputed term by term, independent of the assembled core.
    double worst = 0.0;
    for (int n = 0; n < Rn; ++n) {
        Complex lhs = w[n];
        for (int k = 0; k < R; ++k) lhs += borel_series(op, k, n, z) * w[k];
        worst = std::max(worst, std::abs(lhs - x[n]));
    }
    return worst / (1.0 + x.norm());
}

Vec formal_resolvent_apply(const PerturbedOperator& op, Complex z, const Vec& x) {
    if (x.size() != op.dim()) throw Error("formal_resolvent_apply: wrong vector length");
    const Vec dinv = diag_power(op.spectrum, z, HalfPower::minus_one);
    if (op.rank() == 0) return dinv.cwiseProduct(x);
    const CoreInverse inv = invert_core(assemble_core(op, z));
    const Vec w = op.coeffs.beta.adjoint() * dinv.cwiseProduct(x);
    const Vec bx = dinv.cwiseProduct(op.coeffs.alpha * (inv.a * w));
    return dinv.cwiseProduct(x) - bx;
}

double woodbury_residual(const PerturbedOperator& op, Complex z) {
    const int N = op.dim(), R = op.rank();
    if (R == 0) return 0.0;
    const Vec s = diag_power(op.spectrum, z, HalfPower::minus_half);
    const Mat X = s.asDiagonal() * op.coeffs.alpha;                // N x R
    const Mat Y = op.coeffs.beta.adjoint() * Mat(s.asDiagonal());  // R x N
    const Mat IXY = Mat::Identity(N, N) + X * Y;
    const Mat core = Mat::Identity(R, R) + Y * X;
    const Mat L = X * core.partialPivLu().solve(Y);
    return (IXY * (Mat::Identity(N, N) - L) - Mat::Identity(N, N)).norm();
}

SymmetrizedOperator symmetrized_operator(const PerturbedOperator& op, Complex xi_point) {
    const int N = op.dim();
    const Vec s = diag_power(op.spectrum, xi_point, HalfPower::plus_half);
    const Vec sinv = diag_power(op.spectrum, xi_point, HalfPower::minus_half);

    SymmetrizedOperator out;
    out.T_tilde = Mat::Zero(N, N);
    out.T_tilde.diagonal() = op.spectrum.lambdas.array() - xi_point;
    if (op.rank() > 0)
        out.T_tilde += sinv.asDiagonal() * op.coeffs.alpha * op.coeffs.beta.adjoint() *
                       Mat(s.asDiagonal());

    const Mat Tshift = op.dense() - xi_point * Mat::Identity(N, N);
    const Mat S = s.asDiagonal();
    const Mat right_lhs = Tshift * S;
    const Mat right_rhs = S * out.T_tilde;
    out.residual_right = (right_lhs - right_rhs).norm() / std::max(1e-300, right_lhs.norm());

    const Mat U = sinv.asDiagonal() * Tshift;
    const Mat left_lhs = U * Tshift;
    const Mat left_rhs = out.T_tilde * U;
    out.residual_left = (left_lhs - left_rhs).norm() / std::max(1e-300, left_lhs.norm());
    return out;
}

ContinuityScan continuity_scan(const PerturbedOperator& op, const HalfPlaneContour& contour,
                               int levels, int base_samples_per_panel) {
    ContinuityScan scan;
    double prev_sup = 0.0;
    for (int level = 0; level < levels; ++level) {
        const int per_panel = base_samples_per_panel << level;
        double sup = 0.0;
        for (const Panel& p : contour.panels) {
            for (int i = 0; i < per_panel; ++i) {
                const double t = (i + 0.5) / per_panel;
                const Complex z = p.point(t);
                try {
                    const CoreInverse inv = invert_core(assemble_core(op, z));
                    sup = std::max(sup, inv.norm);
                } catch (const Error& e) {
                    throw Error(std::string("continuity_scan: inversion failed at z = (") +
                                std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                "): " + e.what());
                }
            }
        }
        sup = std::max(sup, prev_sup);  // ladder samples are nested in spirit
        scan.sup_per_level.push_back(sup);
        if (level == levels - 1 && prev_sup > 0.0)
            scan.cauchy_ok = std::abs(sup - prev_sup) <= 0.01 * sup;
        prev_sup = sup;
    }
    scan.sup_norm = prev_sup;
    scan.C_xi = prev_sup * prev_sup;
    return scan;
}

}  // namespace specidem
