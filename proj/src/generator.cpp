#include "specidem/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace specidem {

GeneratedInstance random_instance(const GeneratorConfig& cfg) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::mt19937_64 rng(cfg.seed + 7919ull * attempt);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);

        Vec lambdas(cfg.N);
        bool ok = true;
        for (int n = 0; n < cfg.N && ok; ++n) {
            for (int tries = 0;; ++tries) {
                const double r = cfg.spectral_radius * std::sqrt(unif(rng));
                const double th = 2.0 * std::numbers::pi * unif(rng);
                const Complex z = std::polar(r, th);
                bool clear = true;
                for (int m = 0; m < n; ++m)
                    if (std::abs(z - lambdas[m]) < 10.0 * cfg.min_gap) clear = false;
                if (clear) {
                    lambdas[n] = z;
                    break;
                }
                if (tries > 1000) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;

        Mat alpha(cfg.N, cfg.R), beta(cfg.N, cfg.R);
        const double s = cfg.coeff_scale / std::sqrt(static_cast<double>(cfg.N));
        for (int k = 0; k < cfg.R; ++k)
            for (int n = 0; n < cfg.N; ++n) {
                alpha(n, k) = s * Complex(gauss(rng), gauss(rng));
                beta(n, k) = s * Complex(gauss(rng), gauss(rng));
            }

        SpectrumSpec spec;
        spec.lambdas = lambdas;
        spec.a = lambdas.real().minCoeff();
        spec.b = lambdas.real().maxCoeff();
        spec.normalized = true;

        GeneratedInstance inst;
        inst.op = build_operator(spec, CoefficientFamily{alpha, beta, std::nullopt});
        inst.eig = oracle::dense_eig(inst.op.dense());
        if (inst.eig.near_defective || inst.eig.min_gap < cfg.min_gap) continue;
        if (inst.eig.values.cwiseAbs().maxCoeff() >= 1.0 - 1e-3) continue;
        return inst;
    }
    throw Error("random_instance: no admissible instance after 100 attempts");
}

double pick_xi(const GeneratedInstance& inst, double min_clearance) {
    std::vector<double> re;
    for (int n = 0; n < inst.op.dim(); ++n) {
        re.push_back(inst.op.spectrum.lambdas[n].real());
        re.push_back(inst.eig.values[n].real());
    }
    std::sort(re.begin(), re.end());
    double best_xi = 0.0, best_gap = 0.0;
    for (size_t i = 0; i + 1 < re.size(); ++i) {
        const double gap = re[i + 1] - re[i];
        if (gap > best_gap) {
            best_gap = gap;
            best_xi = 0.5 * (re[i] + re[i + 1]);
        }
    }
    if (best_gap / 2.0 < min_clearance)
        throw Error("pick_xi: no abscissa with clearance " + std::to_string(min_clearance));
    return best_xi;
}

namespace {

// Majorant pieces for sum_{n>N} m_n^2 log(1 + 1/m_n), using
// log(1 + 1/m) <= log 2 + max(0, log(1/m)).
double geometric_log_tail(double c, double q, int N) {
    const double q2 = q * q;
    const double s1 = std::pow(q2, N + 1) / (1.0 - q2);
    const double s2 = std::pow(q2, N + 1) * ((N + 1) - N * q2) / ((1.0 - q2) * (1.0 - q2));
    const double K = std::log(2.0) + std::max(0.0, std::log(1.0 / c));
    return c * c * (K * s1 + std::log(1.0 / q) * s2);
}

double power_log_tail(double c, double p, int N) {
    // Integral-test majorant, valid for 2p > 1 and N >= 3.
    const double a = 2.0 * p - 1.0;
    const double i0 = std::pow(N, -a) / a;
    const double i1 = std::pow(N, -a) * (a * std::log(double(N)) + 1.0) / (a * a);
    const double K = std::log(2.0) + std::max(0.0, std::log(1.0 / c));
    return c * c * (K * i0 + p * i1);
}

}  // namespace

CoefficientFamily make_family(const FamilySpec& spec, int N) {
    if (N < 3) throw Error("make_family: need N >= 3");
    CoefficientFamily fam;
    fam.alpha.resize(N, spec.R);
    fam.beta.resize(N, spec.R);
    TailBounds tail;

    if (spec.kind == "geometric") {
        if (!(spec.ratio > 0.0 && spec.ratio < 1.0))
            throw Error("make_family: geometric ratio must be in (0,1)");
        for (int k = 0; k < spec.R; ++k)
            for (int n = 0; n < N; ++n)
                fam.alpha(n, k) = fam.beta(n, k) = spec.c * std::pow(spec.ratio, n + 1);
        const double q2 = spec.ratio * spec.ratio;
        const double l2_one = spec.c * spec.c * std::pow(q2, N + 1) / (1.0 - q2);
        // Both coefficient arrays and all R columns contribute.
        tail.l2 = 2.0 * spec.R * l2_one;
        tail.logsum = 2.0 * spec.R * geometric_log_tail(spec.c, spec.ratio, N);
    } else if (spec.kind == "power") {
        for (int k = 0; k < spec.R; ++k)
            for (int n = 0; n < N; ++n)
                fam.alpha(n, k) = fam.beta(n, k) = spec.c * std::pow(n + 1.0, -spec.p);
        if (spec.p > 0.5) {
            const double a = 2.0 * spec.p - 1.0;
            tail.l2 = 2.0 * spec.R * spec.c * spec.c * std::pow(double(N), -a) / a;
            tail.logsum = 2.0 * spec.R * power_log_tail(spec.c, spec.p, N);
        } else {
            // The infinite family diverges; certify that, rather than the bound.
            tail.l2 = std::numeric_limits<double>::infinity();
            tail.logsum = std::numeric_limits<double>::infinity();
        }
    } else {
        throw Error("make_family: unknown kind '" + spec.kind + "'");
    }

    if (!spec.acc_re.empty()) {
        const auto acc = spec.acc_re;
        const double l2 = *tail.l2;
        tail.delta = [acc, l2](double xi) -> std::optional<double> {
            double margin = std::numeric_limits<double>::infinity();
            for (double p : acc) margin = std::min(margin, std::abs(p - xi));
            if (margin <= 0.0) return std::nullopt;
            return l2 / margin;
        };
    }
    fam.tail = tail;
    return fam;
}

SpectrumSpec make_alternating_spectrum(int N) {
    SpectrumSpec spec;
    spec.lambdas.resize(N);
    for (int n = 0; n < N; ++n) spec.lambdas[n] = (n % 2 == 0) ? 0.5 : -0.5;
    spec.a = -0.5;
    spec.b = 0.5;
    spec.accumulation_declared = true;
    spec.normalized = true;
    return spec;
}

}  // namespace specidem
