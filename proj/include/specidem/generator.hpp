#pragma once

#include "specidem/model.hpp"
#include "specidem/oracle.hpp"

#include <cstdint>

namespace specidem {

/// Deterministic random test instances: spectra in a disc, simple spectrum
/// enforced so the eigenprojector oracle stays well conditioned.
struct GeneratorConfig {
    int N = 16;
    int R = 2;
    double spectral_radius = 0.9;
    double min_gap = 1e-4;
    double coeff_scale = 0.05;
    std::uint64_t seed = 1;
};

struct GeneratedInstance {
    PerturbedOperator op;
    oracle::EigenSystem eig;
};

GeneratedInstance random_instance(const GeneratorConfig& cfg);

/// Abscissa with the widest clearance from every Re lambda_n and Re mu_i.
/// Throws when no interior gap reaches `min_clearance`.
double pick_xi(const GeneratedInstance& inst, double min_clearance = 0.05);

/// Closed-form coefficient families with certified tails.
struct FamilySpec {
    std::string kind;  ///< "geometric" (c * ratio^n) or "power" (c * n^-p)
    double c = 1.0;
    double ratio = 0.5;  ///< geometric
    double p = 1.0;      ///< power
    int R = 1;
    /// Real parts of the declared accumulation points; enables delta tails.
    std::vector<double> acc_re;
};

CoefficientFamily make_family(const FamilySpec& spec, int N);

/// Lambda alternating +1/2, -1/2 (the worked closed-form example spectrum).
SpectrumSpec make_alternating_spectrum(int N);

}  // namespace specidem
