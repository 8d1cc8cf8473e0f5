#include "specidem/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace specidem {

void SpectrumSpec::validate() const {
    for (int n = 0; n < size(); ++n) {
        if (!std::isfinite(lambdas[n].real()) || !std::isfinite(lambdas[n].imag()))
            throw Error("SpectrumSpec: non-finite eigenvalue at index " + std::to_string(n));
        if (normalized && std::abs(lambdas[n]) >= 1.0)
            throw Error("SpectrumSpec: |lambda| >= 1 with normalized flag set");
    }
    if (accumulation_declared && a >= b)
        throw Error("SpectrumSpec: declared accumulation range has a >= b");
}

void CoefficientFamily::validate() const {
    if (alpha.rows() != beta.rows() || alpha.cols() != beta.cols())
        throw Error("CoefficientFamily: alpha and beta shapes differ");
    for (int k = 0; k < rank(); ++k) {
        if (alpha.col(k).norm() == 0.0)
            throw Error("CoefficientFamily: u_" + std::to_string(k + 1) + " is the zero vector");
        if (beta.col(k).norm() == 0.0)
            throw Error("CoefficientFamily: v_" + std::to_string(k + 1) + " is the zero vector");
    }
}

Vec PerturbedOperator::apply(const Vec& x) const {
    // D x + alpha (beta^H x)
    return spectrum.lambdas.cwiseProduct(x) + coeffs.alpha * (coeffs.beta.adjoint() * x);
}

Vec PerturbedOperator::apply_adjoint(const Vec& x) const {
    return spectrum.lambdas.conjugate().cwiseProduct(x) +
           coeffs.beta * (coeffs.alpha.adjoint() * x);
}

Mat PerturbedOperator::dense() const {
    Mat T = Mat::Zero(dim(), dim());
    T.diagonal() = spectrum.lambdas;
    if (rank() > 0) T += coeffs.alpha * coeffs.beta.adjoint();
    return T;
}

Mat PerturbedOperator::dense_adjoint() const { return dense().adjoint(); }

PerturbedOperator build_operator(SpectrumSpec spectrum, CoefficientFamily coeffs) {
    spectrum.validate();
    if (coeffs.alpha.size() == 0 && coeffs.beta.size() == 0) {
        coeffs.alpha.resize(spectrum.size(), 0);
        coeffs.beta.resize(spectrum.size(), 0);
    }
    if (coeffs.dim() != spectrum.size())
        throw Error("build_operator: coefficient rows do not match spectrum length");
    coeffs.validate();
    return PerturbedOperator{std::move(spectrum), std::move(coeffs)};
}

std::pair<PerturbedOperator, AffineMap> normalize_to_disc(const PerturbedOperator& op,
                                                          double margin) {
    if (!(margin > 0.0 && margin < 1.0)) throw Error("normalize_to_disc: margin not in (0,1)");

    const double r_lambda = op.spectrum.lambdas.cwiseAbs().maxCoeff();
    Eigen::ComplexEigenSolver<Mat> es(op.dense(), /*computeEigenvectors=*/false);
    const double r_dense = es.eigenvalues().cwiseAbs().maxCoeff();

    if (r_lambda <= 1.0 - margin && r_dense <= 1.0 - margin / 2.0) {
        PerturbedOperator out = op;
        out.spectrum.normalized = true;
        return {out, AffineMap{}};
    }

    // Center at the midpoint of the bounding box of Lambda and the dense
    // eigenvalues, then shrink.
    double re_lo = op.spectrum.lambdas.real().minCoeff();
    double re_hi = op.spectrum.lambdas.real().maxCoeff();
    double im_lo = op.spectrum.lambdas.imag().minCoeff();
    double im_hi = op.spectrum.lambdas.imag().maxCoeff();
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        Complex mu = es.eigenvalues()[i];
        re_lo = std::min(re_lo, mu.real());
        re_hi = std::max(re_hi, mu.real());
        im_lo = std::min(im_lo, mu.imag());
        im_hi = std::max(im_hi, mu.imag());
    }
    Complex center{(re_lo + re_hi) / 2.0, (im_lo + im_hi) / 2.0};
    // Degenerate centered cases keep the origin so scaling alone suffices.
    double rl = 0.0, rd = 0.0;
    for (int n = 0; n < op.dim(); ++n) rl = std::max(rl, std::abs(op.spectrum.lambdas[n] - center));
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        rd = std::max(rd, std::abs(es.eigenvalues()[i] - center));
    double c = 1.0;
    if (rl > 0.0) c = std::min(c, (1.0 - margin) / rl);
    if (rd > 0.0) c = std::min(c, (1.0 - margin / 2.0) / rd);
    AffineMap map{Complex(c, 0.0), -Complex(c, 0.0) * center};

    PerturbedOperator out = op;
    for (int n = 0; n < op.dim(); ++n) out.spectrum.lambdas[n] = map(op.spectrum.lambdas[n]);
    out.spectrum.a = c * (op.spectrum.a - center.real());
    out.spectrum.b = c * (op.spectrum.b - center.real());
    out.coeffs.alpha *= map.c;  // c T + d I = D_{c Lambda + d} + sum (c u_k)(x)v_k
    out.coeffs.tail.reset();    // closed-form tails are not carried through scaling
    out.spectrum.normalized = true;
    return {out, map};
}

namespace {
double log_gate_term(double m) { return m * m * std::log1p(1.0 / m); }
}  // namespace

GateReport summability_gate(const CoefficientFamily& coeffs, double threshold,
                            bool require_certified) {
    if (!(threshold > 0.0)) throw Error("summability_gate: threshold must be positive");
    GateReport rep;
    rep.threshold = threshold;
    const int N = coeffs.dim(), R = coeffs.rank();
    for (int k = 0; k < R; ++k) {
        for (int n = 0; n < N; ++n) {
            const double ma = std::abs(coeffs.alpha(n, k));
            const double mb = std::abs(coeffs.beta(n, k));
            if (ma > 0.0) {
                rep.log_sum_alpha += log_gate_term(ma);
                rep.l2_sum += ma * ma;
                if (ma >= 1.0)
                    rep.exceptional_u.emplace_back(n, k);
                else {
                    rep.plain_log_sum += ma * ma * std::log(1.0 / ma);
                    rep.sup_outside_exceptional = std::max(rep.sup_outside_exceptional, ma);
                }
            }
            if (mb > 0.0) {
                rep.log_sum_beta += log_gate_term(mb);
                rep.l2_sum += mb * mb;
                if (mb >= 1.0)
                    rep.exceptional_v.emplace_back(n, k);
                else {
                    rep.plain_log_sum += mb * mb * std::log(1.0 / mb);
                    rep.sup_outside_exceptional = std::max(rep.sup_outside_exceptional, mb);
                }
            }
        }
    }
    if (coeffs.tail && coeffs.tail->logsum) {
        rep.tail = *coeffs.tail->logsum;
        rep.certified = true;
    }
    double total = rep.log_sum_alpha + rep.log_sum_beta + rep.tail.value_or(0.0);
    rep.accept = std::isfinite(total) && total <= threshold;
    if (require_certified && !rep.certified) rep.accept = false;
    return rep;
}

std::vector<int> index_set(const SpectrumSpec& spectrum,
                           const std::function<bool(Complex)>& region) {
    std::vector<int> out;
    for (int n = 0; n < spectrum.size(); ++n)
        if (region(spectrum.lambdas[n])) out.push_back(n);
    return out;
}

}  // namespace specidem
