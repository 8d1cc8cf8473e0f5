#pragma once

#include "specidem/generator.hpp"

#include <random>

namespace specidem::testing {

// diag(0.5, -0.5) with no perturbation.
inline PerturbedOperator diag_pair() {
    SpectrumSpec spec;
    spec.lambdas.resize(2);
    spec.lambdas << Complex(0.5, 0.0), Complex(-0.5, 0.0);
    spec.a = -0.5;
    spec.b = 0.5;
    spec.normalized = true;
    return build_operator(spec, CoefficientFamily{});
}

// diag(0.5, -0.5) + u v^H with u = v = (0.1, 0.1): the worked 2x2 instance,
// dense form [[0.51, 0.01], [0.01, -0.49]].
inline PerturbedOperator worked_2x2() {
    SpectrumSpec spec;
    spec.lambdas.resize(2);
    spec.lambdas << Complex(0.5, 0.0), Complex(-0.5, 0.0);
    spec.a = -0.5;
    spec.b = 0.5;
    spec.normalized = true;
    CoefficientFamily fam;
    fam.alpha = Mat::Constant(2, 1, Complex(0.1, 0.0));
    fam.beta = Mat::Constant(2, 1, Complex(0.1, 0.0));
    return build_operator(spec, std::move(fam));
}

inline Vec random_vec(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = Complex(gauss(rng), gauss(rng));
    return x;
}

}  // namespace specidem::testing
