#include "specidem/idempotent.hpp"

#include "specidem/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace specidem {

namespace {
double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}
}  // namespace

DeltaReport delta_membership(const PerturbedOperator& op, double xi, const DeltaConfig& cfg,
                             const RealVec* eig_real_parts) {
    DeltaReport rep;
    rep.xi = xi;
    rep.margin = std::numeric_limits<double>::infinity();
    for (int n = 0; n < op.dim(); ++n) {
        const double d = std::abs(op.spectrum.lambdas[n].real() - xi);
        rep.margin = std::min(rep.margin, d);
        if (d > 0.0) {
            rep.wsum_alpha += op.coeffs.alpha.row(n).squaredNorm() / d;
            rep.wsum_beta += op.coeffs.beta.row(n).squaredNorm() / d;
        } else {
            rep.wsum_alpha = rep.wsum_beta = std::numeric_limits<double>::infinity();
        }
    }
    if (op.coeffs.tail && op.coeffs.tail->delta) rep.tail = op.coeffs.tail->delta(xi);

    if (cfg.check_eigenvalues) {
        RealVec re;
        if (eig_real_parts) {
            re = *eig_real_parts;
        } else {
            // Re sigma_p(T*) = Re conj(sigma_p(T)), so one solve covers both.
            Eigen::ComplexEigenSolver<Mat> es(op.dense(), false);
            re = es.eigenvalues().real();
        }
        rep.eig_clearance = std::numeric_limits<double>::infinity();
        for (int i = 0; i < re.size(); ++i)
            rep.eig_clearance = std::min(rep.eig_clearance, std::abs(re[i] - xi));
    } else {
        rep.eig_clearance = rep.margin;
    }

    const double tail = rep.tail.value_or(0.0);
    rep.accept = rep.margin >= cfg.margin_floor && rep.eig_clearance >= cfg.eig_floor &&
                 rep.wsum_alpha + tail <= cfg.cap && rep.wsum_beta + tail <= cfg.cap;
    return rep;
}

DeltaScan sample_delta(const PerturbedOperator& op, int grid_size, const DeltaConfig& cfg) {
    DeltaScan scan;
    if (grid_size <= 0) return scan;
    double a = op.spectrum.a, b = op.spectrum.b;
    if (!(a < b)) {
        a = op.spectrum.lambdas.real().minCoeff();
        b = op.spectrum.lambdas.real().maxCoeff();
    }
    RealVec re;
    if (cfg.check_eigenvalues) {
        Eigen::ComplexEigenSolver<Mat> es(op.dense(), false);
        re = es.eigenvalues().real();
    }
    int accepted = 0;
    for (int i = 0; i < grid_size; ++i) {
        const double xi = a + (b - a) * (i + 0.5) / grid_size;
        DeltaReport rep = delta_membership(op, xi, cfg, cfg.check_eigenvalues ? &re : nullptr);
        accepted += rep.accept ? 1 : 0;
        scan.reports.push_back(std::move(rep));
    }
    scan.accepted_fraction = static_cast<double>(accepted) / grid_size;
    return scan;
}

SpectralIdempotent half_plane_idempotent(const PerturbedOperator& op, double xi, Side side,
                                         const IdempotentOptions& opts) {
    const int N = op.dim(), R = op.rank();
    SpectralIdempotent out;
    out.xi = xi;
    out.side = side;
    out.delta = delta_membership(op, xi, opts.delta);
    if (!out.delta.accept)
        throw Error("half_plane_idempotent: xi = " + std::to_string(xi) +
                    " rejected by the decomposability gate");

    const HalfPlaneContour contour =
        build_contour(op.spectrum, xi, side, opts.quad, opts.delta.margin_floor);

    // Diagonal part: exact, from the enclosed index set.
    out.J = Mat::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        const double re = op.spectrum.lambdas[n].real();
        const bool inside = (side == Side::plus) ? re > xi : re < xi;
        if (inside) out.J(n, n) = 1.0;
    }

    double cond_max = 1.0;
    if (R > 0) {
        auto kernel = [&](Complex z) -> Mat {
            const Vec dinv = diag_power(op.spectrum, z, HalfPower::minus_one,
                                        opts.quad.collision_floor);
            const CoreInverse inv = invert_core(assemble_core(op, z));
            cond_max = std::max(cond_max, inv.condition);
            // B(z) = Dinv alpha A beta^H Dinv, one core inversion shared by
            // all columns.
            const Mat L = dinv.asDiagonal() * (op.coeffs.alpha * inv.a);
            const Mat right = (dinv.conjugate().asDiagonal() * op.coeffs.beta).adjoint();
            return Mat(L * right);
        };
        auto res = integrate(kernel, contour, opts.quad);
        out.J += res.value / Complex(0.0, 2.0 * std::numbers::pi);
        out.diag.quad_error = res.error / (2.0 * std::numbers::pi);
        out.diag.evaluations = res.evaluations;
        out.diag.quad_converged = res.converged;
        if (!res.converged)
            throw Error("half_plane_idempotent: quadrature did not converge (residual " +
                        std::to_string(out.diag.quad_error) + ")");
    }
    out.diag.core_cond_max = cond_max;

    if (opts.diagnostics) {
        const Mat T = op.dense();
        out.diag.idempotency = spectral_norm(out.J * out.J - out.J);
        out.diag.commutation = spectral_norm(out.J * T - T * out.J);
        if (R > 0) {
            ContinuityScan scan = continuity_scan(op, contour);
            out.diag.C_xi = scan.C_xi;
        }
        std::vector<Complex> lam(op.spectrum.lambdas.data(),
                                 op.spectrum.lambdas.data() + N);
        out.diag.C_hat = contour_weight_constant(contour, lam, opts.quad);
        // Empirical version of the paper's norm bound for the integral part.
        double wa = out.delta.wsum_alpha + out.delta.tail.value_or(0.0);
        double wb = out.delta.wsum_beta + out.delta.tail.value_or(0.0);
        out.diag.M_hat = out.diag.C_hat * out.diag.C_hat * out.diag.C_xi * wa * wb;
    }
    return out;
}

PairVerification verify_pair(const SpectralIdempotent& plus, const SpectralIdempotent& minus,
                             const PerturbedOperator& op) {
    if (plus.xi != minus.xi) throw Error("verify_pair: mismatched xi");
    const int N = op.dim();
    PairVerification v;
    const Mat I = Mat::Identity(N, N);
    v.sum_residual = spectral_norm(plus.J + minus.J - I);
    v.prod_pm = spectral_norm(plus.J * minus.J);
    v.prod_mp = spectral_norm(minus.J * plus.J);
    v.max_idempotency = std::max(spectral_norm(plus.J * plus.J - plus.J),
                                 spectral_norm(minus.J * minus.J - minus.J));
    v.rank_plus = oracle::numerical_rank(plus.J);
    v.rank_minus = oracle::numerical_rank(minus.J);
    v.nontrivial_plus = v.rank_plus > 0 && v.rank_plus < N;
    v.nontrivial_minus = v.rank_minus > 0 && v.rank_minus < N;
    return v;
}

PerturbedOperator rotated_operator(const PerturbedOperator& op) {
    PerturbedOperator rot = op;
    const Complex mi(0.0, -1.0);
    rot.spectrum.lambdas = mi * op.spectrum.lambdas;
    rot.spectrum.a = op.spectrum.lambdas.imag().minCoeff();
    rot.spectrum.b = op.spectrum.lambdas.imag().maxCoeff();
    rot.spectrum.accumulation_declared = false;
    rot.coeffs.alpha = mi * op.coeffs.alpha;
    rot.coeffs.tail.reset();
    return rot;
}

RectangleIdempotent rectangle_idempotent(const PerturbedOperator& op, double x1, double x2,
                                         double y1, double y2,
                                         const IdempotentOptions& opts) {
    if (!(x1 < x2) || !(y1 < y2)) throw Error("rectangle_idempotent: degenerate rectangle");
    const PerturbedOperator rot = rotated_operator(op);

    IdempotentOptions fac_opts = opts;
    fac_opts.diagnostics = true;
    const SpectralIdempotent f0 = half_plane_idempotent(op, x1, Side::plus, fac_opts);
    const SpectralIdempotent f1 = half_plane_idempotent(op, x2, Side::minus, fac_opts);
    const SpectralIdempotent f2 = half_plane_idempotent(rot, y1, Side::plus, fac_opts);
    const SpectralIdempotent f3 = half_plane_idempotent(rot, y2, Side::minus, fac_opts);
    const std::array<const SpectralIdempotent*, 4> fs{&f0, &f1, &f2, &f3};

    RectangleIdempotent out;
    const double tnorm = std::max(1e-300, spectral_norm(op.dense()));
    for (int i = 0; i < 4; ++i) {
        out.factor_idempotency[i] = fs[i]->diag.idempotency;
        const double scale = 1.0 + spectral_norm(fs[i]->J);
        if (fs[i]->diag.idempotency > 1e-8 * scale * scale)
            throw Error("rectangle_idempotent: factor " + std::to_string(i) +
                        " failed idempotency verification");
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            out.factor_commute = std::max(
                out.factor_commute, spectral_norm(fs[i]->J * fs[j]->J - fs[j]->J * fs[i]->J));

    out.J = f0.J * f1.J * f2.J * f3.J;
    const Mat T = op.dense();
    out.idempotency = spectral_norm(out.J * out.J - out.J);
    out.commutation = spectral_norm(out.J * T - T * out.J) / tnorm;
    out.rank = oracle::numerical_rank(out.J);
    return out;
}

}  // namespace specidem
