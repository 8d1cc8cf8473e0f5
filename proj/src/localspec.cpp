#include "specidem/localspec.hpp"

#include "specidem/oracle.hpp"

#include <numbers>

namespace specidem {

using std::numbers::pi;

Complex divided_difference(const std::function<Complex(Complex)>& g, Complex z, Complex w,
                           double fd_step) {
    if (z != w) return (g(z) - g(w)) / (z - w);
    return (g(w + fd_step) - g(w - fd_step)) / (2.0 * fd_step);
}

CertificateEvaluator::CertificateEvaluator(const PerturbedOperator& op, const Vec& y,
                                           double xi, Side side, int order, int depth)
    : op_(op), xi_(xi), side_(side), R_(op.rank()) {
    const int N = op.dim();
    for (int n = 0; n < N; ++n) {
        const double re = op.spectrum.lambdas[n].real();
        const bool inside = (side == Side::plus) ? re > xi : re < xi;
        (inside ? inside_ : outside_).push_back(n);
    }

    const HalfPlaneContour contour = build_contour(op.spectrum, xi, side);
    const GaussLegendre& gl = GaussLegendre::get(order);
    const int pieces = 1 << depth;
    for (const Panel& p : contour.panels) {
        for (int i = 0; i < pieces; ++i) {
            const double ta = static_cast<double>(i) / pieces;
            const double tb = static_cast<double>(i + 1) / pieces;
            const double mid = 0.5 * (ta + tb), half = 0.5 * (tb - ta);
            for (int q = 0; q < order; ++q) {
                const double t = mid + half * gl.nodes[q];
                nodes_.push_back(p.point(t));
                weights_.push_back(gl.weights[q] * half * p.deriv(t));
            }
        }
    }

    const long M = static_cast<long>(nodes_.size());
    c_.resize(M, std::max(R_, 0));
    s_.resize(M, N);
    for (long i = 0; i < M; ++i) {
        const Complex z = nodes_[i];
        const Vec dinv = diag_power(op.spectrum, z, HalfPower::minus_one);
        if (R_ > 0) {
            const CoreInverse inv = invert_core(assemble_core(op, z));
            const Vec w = op.coeffs.beta.adjoint() * dinv.cwiseProduct(y);
            c_.row(i) = (inv.a * w).transpose();
            s_.row(i) = (op.coeffs.alpha * c_.row(i).transpose()).transpose();
        } else {
            s_.row(i).setZero();
        }
    }
}

double CertificateEvaluator::sup_density() const {
    return c_.size() == 0 ? 0.0 : c_.cwiseAbs().maxCoeff();
}

double CertificateEvaluator::node_clearance(Complex z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Complex& n : nodes_) d = std::min(d, std::abs(z - n));
    return d;
}

Vec CertificateEvaluator::g(Complex z) const {
    Vec out = Vec::Zero(R_);
    for (size_t i = 0; i < nodes_.size(); ++i)
        out += weights_[i] / (z - nodes_[i]) * c_.row(i).transpose();
    return out / Complex(0.0, 2.0 * pi);
}

Complex CertificateEvaluator::gamma(int k, Complex z, Complex lambda) const {
    Complex acc = 0.0;
    for (size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * c_(i, k) / ((z - nodes_[i]) * (lambda - nodes_[i]));
    return -acc / Complex(0.0, 2.0 * pi);
}

Vec CertificateEvaluator::projected_tail(Complex z) const {
    const int N = op_.dim();
    Vec out = Vec::Zero(N);
    if (outside_.empty() || R_ == 0) return out;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const Complex wz = weights_[i] / (z - nodes_[i]);
        for (int n : outside_) out[n] += wz * s_(i, n) / (op_.spectrum.lambdas[n] - nodes_[i]);
    }
    return -out / Complex(0.0, 2.0 * pi);
}

Vec CertificateEvaluator::local_resolvent(const Vec& x, Complex z) const {
    const int N = op_.dim();
    Vec fx = projected_tail(z);
    const Vec gz = g(z);
    for (int n : inside_) {
        Complex num = x[n];
        for (int k = 0; k < R_; ++k) num -= gz[k] * op_.coeffs.alpha(n, k);
        fx[n] = num / (op_.spectrum.lambdas[n] - z);
    }
    (void)N;
    return fx;
}

std::vector<Complex> certificate_grid(const PerturbedOperator& op, double xi, Side side,
                                      const CertificateConfig& cfg) {
    std::vector<Complex> grid;
    for (double radius : {1.5, 3.0}) {
        for (int i = 0; i < cfg.circle_points; ++i) {
            const double th = 2.0 * pi * (i + 0.25) / cfg.circle_points;
            grid.push_back(std::polar(radius, th));
        }
    }
    // Interior points of F^c inside the closed disc, clear of the curve and
    // of Lambda. Deterministic candidate sweep over concentric circles.
    const HalfPlaneContour contour = build_contour(op.spectrum, xi, side);
    int found = 0;
    for (int ring = 0; ring < 64 && found < cfg.interior_points; ++ring) {
        const double r = 0.15 + 0.8 * (ring % 8) / 8.0;
        const int m = 24 + ring;
        for (int i = 0; i < m && found < cfg.interior_points; ++i) {
            const Complex z = std::polar(r, 2.0 * pi * (i + 0.5 * (ring / 8)) / m);
            const bool in_fc = (side == Side::plus) ? z.real() < xi : z.real() > xi;
            if (!in_fc) continue;
            if (contour.distance(z) < cfg.grid_clearance) continue;
            bool clear = true;
            for (int n = 0; n < op.dim(); ++n)
                if (std::abs(z - op.spectrum.lambdas[n]) < 0.02) clear = false;
            if (!clear) continue;
            grid.push_back(z);
            ++found;
        }
    }
    return grid;
}

Certificate check_membership(const PerturbedOperator& op, const Vec& x,
                             const CertificateEvaluator& ev,
                             const std::vector<Complex>& grid,
                             const CertificateConfig& cfg) {
    const int R = op.rank();
    const double xnorm = std::max(1e-300, x.norm());
    const double scale = 1.0 + x.norm();
    Certificate cert;

    // (i): Fourier coefficients over N_{F^c} match sum_k g_k(lambda_n) alpha_n^{(k)}.
    for (int n : ev.outside_indices()) {
        const Vec gl = ev.g(op.spectrum.lambdas[n]);
        Complex rhs = 0.0;
        for (int k = 0; k < R; ++k) rhs += gl[k] * op.coeffs.alpha(n, k);
        cert.res_condition_i = std::max(cert.res_condition_i, std::abs(x[n] - rhs) / scale);
    }

    const Mat T = op.dense();
    for (const Complex& z : grid) {
        const Vec gz = ev.g(z);

        // (ii): Cauchy-Riemann defect of the projected series on the grid.
        {
            const double h = cfg.cr_step;
            const Vec ddx = (ev.projected_tail(z + h) - ev.projected_tail(z - h)) / (2.0 * h);
            const Vec ddy = (ev.projected_tail(z + Complex(0.0, h)) -
                             ev.projected_tail(z - Complex(0.0, h))) /
                            (2.0 * h);
            cert.res_condition_ii =
                std::max(cert.res_condition_ii, (ddx - ddy / Complex(0.0, 1.0)).norm() / scale);
        }

        // (iii): the displayed identity, both sides, for each k.
        const Vec tail = ev.projected_tail(z);
        for (int k = 0; k < R; ++k) {
            Complex lhs = 0.0, borel_F = 0.0, cross = 0.0, tail_k = 0.0;
            for (int n : ev.inside_indices()) {
                const Complex denom = op.spectrum.lambdas[n] - z;
                const Complex bconj = std::conj(op.coeffs.beta(n, k));
                lhs += x[n] * bconj / denom;
                borel_F += op.coeffs.alpha(n, k) * bconj / denom;
                Complex mixed = 0.0;
                for (int m = 0; m < R; ++m)
                    if (m != k) mixed += gz[m] * op.coeffs.alpha(n, m);
                cross += mixed * bconj / denom;
            }
            for (int n : ev.outside_indices())
                tail_k += tail[n] * std::conj(op.coeffs.beta(n, k));
            const Complex rhs = gz[k] * (borel_F + 1.0) - tail_k + cross;
            cert.res_condition_iii =
                std::max(cert.res_condition_iii, std::abs(lhs - rhs) / scale);
        }

        // (iv): squared-coefficient series against the cap.
        double sq = 0.0;
        for (int n = 0; n < op.dim(); ++n) {
            Complex t = 0.0;
            for (int k = 0; k < R; ++k) t += gz[k] * op.coeffs.alpha(n, k);
            sq += std::norm(t);
        }
        cert.condition_iv_sup = std::max(cert.condition_iv_sup, sq);

        // Local resolvent consistency.
        const Vec fx = ev.local_resolvent(x, z);
        const Vec r = T * fx - z * fx - x;
        cert.res_resolvent = std::max(cert.res_resolvent, r.norm() / xnorm);
    }

    cert.overall =
        std::max({cert.res_condition_i, cert.res_condition_iii, cert.res_resolvent});
    cert.pass = cert.overall <= cfg.pass_tolerance && cert.res_condition_ii <= 1e-6 &&
                cert.condition_iv_sup <= cfg.cap;
    cert.fail = cert.overall > cfg.fail_threshold;
    return cert;
}

TwoPointReport local_two_point_test(const PerturbedOperator& op, double x1, double x2,
                                    const IdempotentOptions& opts) {
    if (!(x1 < x2)) throw Error("local_two_point_test: need x1 < x2");
    TwoPointReport rep;
    rep.at_x1 = delta_membership(op, x1, opts.delta);
    rep.at_x2 = delta_membership(op, x2, opts.delta);
    rep.gates_pass = rep.at_x1.accept && rep.at_x2.accept;
    if (!rep.gates_pass) return rep;

    const SpectralIdempotent jp = half_plane_idempotent(op, x2, Side::plus, opts);
    rep.rank_plus_x2 = oracle::numerical_rank(jp.J);

    // Adjoint instance: T* = D_{conj Lambda} + sum v_k (x) u_k.
    PerturbedOperator adj = op;
    adj.spectrum.lambdas = op.spectrum.lambdas.conjugate();
    adj.coeffs.alpha = op.coeffs.beta;
    adj.coeffs.beta = op.coeffs.alpha;
    adj.coeffs.tail.reset();
    const SpectralIdempotent jm = half_plane_idempotent(adj, x1, Side::minus, opts);
    rep.adjoint_rank_minus_x1 = oracle::numerical_rank(jm.J);

    rep.nondense_proxy = rep.rank_plus_x2 < op.dim() && rep.adjoint_rank_minus_x1 > 0;
    return rep;
}

}  // namespace specidem
