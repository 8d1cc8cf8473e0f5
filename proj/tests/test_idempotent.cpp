#include "helpers.hpp"
#include "specidem/idempotent.hpp"
#include "specidem/oracle.hpp"

#include <doctest.h>

using namespace specidem;
using specidem::testing::diag_pair;
using specidem::testing::worked_2x2;

TEST_SUITE_BEGIN("idempotent");

TEST_CASE("decomposability membership for the diagonal pair") {
    const PerturbedOperator op = diag_pair();
    const DeltaReport mid = delta_membership(op, 0.0);
    CHECK(mid.margin == doctest::Approx(0.5));
    CHECK(mid.wsum_alpha == 0.0);
    CHECK(mid.wsum_beta == 0.0);
    CHECK(mid.accept);

    const DeltaReport on_shadow = delta_membership(op, 0.5);
    CHECK(on_shadow.margin == 0.0);
    CHECK_FALSE(on_shadow.accept);
}

TEST_CASE("weighted sums have the geometric closed form") {
    // Lambda alternating +-1/2, alpha_n = 2^-n: sum |alpha|^2 / 0.5 = 2 sum 4^-n = 2/3.
    FamilySpec fs;
    fs.kind = "geometric";
    fs.c = 1.0;
    fs.ratio = 0.5;
    const PerturbedOperator op =
        build_operator(make_alternating_spectrum(40), make_family(fs, 40));
    DeltaConfig cfg;
    cfg.check_eigenvalues = false;
    const DeltaReport rep = delta_membership(op, 0.0, cfg);
    CHECK(rep.wsum_alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rep.wsum_beta == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("delta scan over the diagonal pair") {
    const DeltaScan scan = sample_delta(diag_pair(), 100);
    CHECK(scan.reports.size() == 100);
    CHECK(scan.accepted_fraction > 0.9);
    for (const DeltaReport& r : scan.reports)
        if (std::min(std::abs(r.xi - 0.5), std::abs(r.xi + 0.5)) > 1e-3) CHECK(r.accept);
    CHECK(sample_delta(diag_pair(), 0).reports.empty());
}

TEST_CASE("rejection concentrates where the weights diverge") {
    // 1/sqrt(n) coefficients with the spectrum piling toward Re = 0.2 makes
    // the weighted sum blow past the cap only near that abscissa.
    const int N = 160;
    SpectrumSpec spec;
    spec.lambdas.resize(N);
    for (int n = 0; n < N; ++n) {
        const double off = 0.5 * std::pow(0.9, n);
        spec.lambdas[n] = Complex(0.2 + (n % 2 == 0 ? off : -off), 0.3);
    }
    spec.a = spec.lambdas.real().minCoeff();
    spec.b = spec.lambdas.real().maxCoeff();
    FamilySpec fs;
    fs.kind = "power";
    fs.c = 1.0;
    fs.p = 0.5;
    CoefficientFamily fam = make_family(fs, N);
    fam.tail.reset();  // judge the truncation itself
    const PerturbedOperator op = build_operator(spec, fam);

    DeltaConfig cfg;
    cfg.check_eigenvalues = false;
    cfg.cap = 500.0;
    const DeltaReport near = delta_membership(op, 0.2005, cfg);
    const DeltaReport far = delta_membership(op, 0.75, cfg);
    CHECK_FALSE(near.accept);
    CHECK(far.accept);
    CHECK(near.wsum_alpha > 5.0 * far.wsum_alpha);
}

TEST_CASE("diagonal instance gives the exact index projector") {
    const SpectralIdempotent j = half_plane_idempotent(diag_pair(), 0.0, Side::plus);
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = 1.0;
    CHECK((j.J - expect).norm() == 0.0);
    CHECK(j.diag.quad_error == 0.0);
    CHECK(j.diag.idempotency == 0.0);
}

TEST_CASE("gate rejection raises an error") {
    CHECK_THROWS_AS(half_plane_idempotent(diag_pair(), 0.5, Side::plus), Error);
}

TEST_CASE("worked 2x2 matches the eigenprojector oracle") {
    const PerturbedOperator op = worked_2x2();
    const SpectralIdempotent j = half_plane_idempotent(op, 0.0, Side::plus);
    const auto sys = oracle::dense_eig(op.dense());
    const Mat P = oracle::riesz_projector(sys, [](Complex mu) { return mu.real() > 0.0; });
    CHECK((j.J - P).norm() <= 1e-8);
}

TEST_CASE("random instance matches the dense Riesz oracle") {
    GeneratorConfig cfg;
    cfg.N = 32;
    cfg.R = 2;
    cfg.seed = 61;
    const auto inst = random_instance(cfg);
    const double xi = pick_xi(inst);
    const SpectralIdempotent j = half_plane_idempotent(inst.op, xi, Side::plus);
    const Mat P =
        oracle::riesz_projector(inst.eig, [xi](Complex mu) { return mu.real() > xi; });
    CHECK((j.J - P).operatorNorm() <= 1e-6);
    CHECK(j.diag.quad_converged);
    CHECK(std::isfinite(j.diag.M_hat));
    CHECK(j.diag.C_xi >= 1.0);
}

TEST_CASE("pair verification") {
    const SpectralIdempotent p0 = half_plane_idempotent(diag_pair(), 0.0, Side::plus);
    const SpectralIdempotent m0 = half_plane_idempotent(diag_pair(), 0.0, Side::minus);
    const PairVerification v0 = verify_pair(p0, m0, diag_pair());
    CHECK(v0.sum_residual == 0.0);
    CHECK(v0.prod_pm == 0.0);
    CHECK(v0.rank_plus + v0.rank_minus == 2);

    GeneratorConfig cfg;
    cfg.N = 24;
    cfg.R = 2;
    cfg.seed = 67;
    const auto inst = random_instance(cfg);
    const double xi = pick_xi(inst);
    const SpectralIdempotent jp = half_plane_idempotent(inst.op, xi, Side::plus);
    const SpectralIdempotent jm = half_plane_idempotent(inst.op, xi, Side::minus);
    const PairVerification v = verify_pair(jp, jm, inst.op);
    CHECK(v.sum_residual <= 1e-8);
    CHECK(v.prod_pm <= 1e-8);
    CHECK(v.prod_mp <= 1e-8);
    CHECK(v.max_idempotency <= 1e-8);
    CHECK(v.rank_plus + v.rank_minus == 24);
    CHECK(v.nontrivial_plus);
    CHECK(v.nontrivial_minus);
    CHECK_THROWS_AS(verify_pair(jp, half_plane_idempotent(inst.op, xi + 0.01, Side::minus),
                                inst.op),
                    Error);
}

TEST_CASE("idempotent depends only on the enclosed eigenvalues") {
    GeneratorConfig cfg;
    cfg.N = 16;
    cfg.R = 2;
    cfg.seed = 71;
    const auto inst = random_instance(cfg);

    // Two abscissae inside one spectral gap enclose the same eigenvalues.
    std::vector<double> re;
    for (int i = 0; i < 16; ++i) {
        re.push_back(inst.eig.values[i].real());
        re.push_back(inst.op.spectrum.lambdas[i].real());
    }
    std::sort(re.begin(), re.end());
    double xi1 = 0.0, xi2 = 0.0, best = 0.0;
    for (size_t i = 0; i + 1 < re.size(); ++i)
        if (re[i + 1] - re[i] > best) {
            best = re[i + 1] - re[i];
            xi1 = re[i] + best / 3.0;
            xi2 = re[i] + 2.0 * best / 3.0;
        }
    REQUIRE(best > 0.15);
    const SpectralIdempotent j1 = half_plane_idempotent(inst.op, xi1, Side::plus);
    const SpectralIdempotent j2 = half_plane_idempotent(inst.op, xi2, Side::plus);
    CHECK((j1.J - j2.J).norm() <= 1e-7);
}

TEST_CASE("refinement changes J by at most the reported error scale") {
    GeneratorConfig cfg;
    cfg.N = 16;
    cfg.R = 2;
    cfg.seed = 73;
    const auto inst = random_instance(cfg);
    const double xi = pick_xi(inst);
    IdempotentOptions coarse;
    coarse.quad.tol = 1e-8;
    coarse.diagnostics = false;
    IdempotentOptions fine;
    fine.quad.tol = 1e-13;
    fine.diagnostics = false;
    const SpectralIdempotent jc = half_plane_idempotent(inst.op, xi, Side::plus, coarse);
    const SpectralIdempotent jf = half_plane_idempotent(inst.op, xi, Side::plus, fine);
    CHECK((jc.J - jf.J).norm() <= 10.0 * jc.diag.quad_error + 1e-12);
}

TEST_CASE("rotated operator is -iT") {
    GeneratorConfig cfg;
    cfg.N = 8;
    cfg.R = 2;
    cfg.seed = 79;
    const PerturbedOperator op = random_instance(cfg).op;
    const PerturbedOperator rot = rotated_operator(op);
    CHECK((rot.dense() - Complex(0.0, -1.0) * op.dense()).norm() <= 1e-15);
}

TEST_CASE("rectangle composites at the extremes") {
    GeneratorConfig cfg;
    cfg.N = 12;
    cfg.R = 1;
    cfg.seed = 83;
    const auto inst = random_instance(cfg);

    // A rectangle swallowing the whole disc gives the identity; an empty
    // sliver in a spectral gap gives zero.
    const RectangleIdempotent all =
        rectangle_idempotent(inst.op, -0.99, 0.99, -0.99, 0.99);
    CHECK((all.J - Mat::Identity(12, 12)).norm() <= 1e-8);
    CHECK(all.rank == 12);
    CHECK(all.factor_commute <= 1e-8);

    CHECK_THROWS_AS(rectangle_idempotent(inst.op, 0.5, 0.2, -0.9, 0.9), Error);
}

TEST_SUITE_END();
