#pragma once

#include "specidem/types.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace specidem {

/// Truncated eigenvalue sequence of the diagonal part, with the real range
/// [a, b] of the declared accumulation set.
struct SpectrumSpec {
    Vec lambdas;
    double a = 0.0;
    double b = 0.0;
    /// a, b come from a generator's closed form, not the finite sample.
    bool accumulation_declared = false;
    /// all |lambda_n| < 1 is asserted (unit-disc assumption).
    bool normalized = false;

    int size() const { return static_cast<int>(lambdas.size()); }
    void validate() const;
};

/// Closed-form tail majorants supplied by family generators. Absent fields
/// mean "uncertified" for the corresponding gate.
struct TailBounds {
    std::optional<double> logsum;  ///< tail of sum |c|^2 log(1+1/|c|)
    std::optional<double> l2;      ///< tail of sum |c|^2
    /// tail of sum |c|^2 / |Re lambda - xi|, when the family pins the
    /// accumulation geometry; returns nullopt where no bound exists.
    std::function<std::optional<double>(double xi)> delta;
};

/// The doubly indexed coefficients: column k of alpha is u_k, column k of
/// beta is v_k, in the fixed orthonormal basis.
struct CoefficientFamily {
    Mat alpha;  // N x R
    Mat beta;   // N x R
    std::optional<TailBounds> tail;

    int dim() const { return static_cast<int>(alpha.rows()); }
    int rank() const { return static_cast<int>(alpha.cols()); }
    void validate() const;
};

/// T = D_Lambda + sum_k u_k (x) v_k at truncation (N, R).
struct PerturbedOperator {
    SpectrumSpec spectrum;
    CoefficientFamily coeffs;

    int dim() const { return spectrum.size(); }
    int rank() const { return coeffs.rank(); }

    /// T x = D x + sum_k <x, v_k> u_k
    Vec apply(const Vec& x) const;
    /// T* x = D* x + sum_k <x, u_k> v_k
    Vec apply_adjoint(const Vec& x) const;
    Mat dense() const;
    Mat dense_adjoint() const;
};

struct GateReport {
    double log_sum_alpha = 0.0;  ///< partial sum of the alpha log-gate
    double log_sum_beta = 0.0;
    double l2_sum = 0.0;                 ///< sum of |alpha|^2 + |beta|^2
    double plain_log_sum = 0.0;          ///< sum |c|^2 log(1/|c|) over |c|<1 entries
    std::optional<double> tail;          ///< certified tail, or uncertified
    bool certified = false;
    bool accept = false;
    double threshold = 0.0;
    double sup_outside_exceptional = 0.0;
    std::vector<std::pair<int, int>> exceptional_u;  ///< (n,k) with |alpha| >= 1
    std::vector<std::pair<int, int>> exceptional_v;
};

PerturbedOperator build_operator(SpectrumSpec spectrum, CoefficientFamily coeffs);

/// Rescale/translate so the truncated spectrum sits inside the unit disc:
/// all |lambda'_n| <= 1 - margin and the dense spectral radius is at most
/// 1 - margin/2. Returns the affine map z -> c z + d that was applied.
std::pair<PerturbedOperator, AffineMap> normalize_to_disc(const PerturbedOperator& op,
                                                          double margin);

/// Evaluate the summability gate: partial sums of the log-condition over the
/// truncation plus the certified tail when one exists.
GateReport summability_gate(const CoefficientFamily& coeffs, double threshold,
                            bool require_certified = false);

/// Indices n with lambda_n in the region (0-based).
std::vector<int> index_set(const SpectrumSpec& spectrum,
                           const std::function<bool(Complex)>& region);

}  // namespace specidem
