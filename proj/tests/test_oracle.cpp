#include "helpers.hpp"
#include "specidem/oracle.hpp"

#include <doctest.h>

using namespace specidem;
using specidem::testing::diag_pair;
using specidem::testing::worked_2x2;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("dense eigendecomposition basics") {
    const auto sys = oracle::dense_eig(diag_pair().dense());
    std::vector<double> re{sys.values[0].real(), sys.values[1].real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(re[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sys.min_gap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(sys.near_defective);
}

TEST_CASE("worked 2x2 eigenvalues from the characteristic polynomial") {
    // mu^2 - 0.02 mu - 0.25 = 0, so mu = 0.01 +- 0.5 sqrt(1.0004).
    const auto sys = oracle::dense_eig(worked_2x2().dense());
    const double root = 0.5 * std::sqrt(1.0004);
    std::vector<double> re{sys.values[0].real(), sys.values[1].real()};
    std::sort(re.begin(), re.end());
    CHECK(re[1] == doctest::Approx(0.01 + root).epsilon(1e-12));
    CHECK(re[0] == doctest::Approx(0.01 - root).epsilon(1e-12));
    CHECK(re[1] == doctest::Approx(0.510100).epsilon(1e-6));
    CHECK(re[0] == doctest::Approx(-0.490100).epsilon(1e-6));
    CHECK(sys.max_residual <= 1e-10);
}

TEST_CASE("left and right eigenvectors are biorthogonal") {
    GeneratorConfig cfg;
    cfg.N = 16;
    cfg.R = 2;
    cfg.seed = 3;
    const auto sys = random_instance(cfg).eig;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const Complex ip = sys.left.col(i).adjoint() * sys.right.col(j);
            CHECK(std::abs(ip - (i == j ? Complex(1.0, 0.0) : Complex(0.0, 0.0))) <= 1e-8);
        }
}

TEST_CASE("Riesz projector over trivial regions") {
    GeneratorConfig cfg;
    cfg.N = 12;
    cfg.R = 1;
    cfg.seed = 5;
    const auto inst = random_instance(cfg);
    const Mat all = oracle::riesz_projector(inst.eig, [](Complex) { return true; });
    CHECK((all - Mat::Identity(12, 12)).norm() <= 1e-8);
    const Mat none = oracle::riesz_projector(inst.eig, [](Complex) { return false; });
    CHECK(none.norm() == 0.0);
}

TEST_CASE("rank-one projector for the worked 2x2") {
    const auto sys = oracle::dense_eig(worked_2x2().dense());
    const Mat P = oracle::riesz_projector(sys, [](Complex mu) { return mu.real() > 0.0; });
    CHECK(oracle::numerical_rank(P) == 1);
    CHECK((P * P - P).norm() <= 1e-12);
    // P fixes the eigenvector of the positive eigenvalue.
    const int i = sys.values[0].real() > 0.0 ? 0 : 1;
    CHECK((P * sys.right.col(i) - sys.right.col(i)).norm() <= 1e-12);
}

TEST_CASE("eigenprojector sum agrees with the dense contour route") {
    GeneratorConfig cfg;
    cfg.N = 16;
    cfg.R = 2;
    cfg.seed = 7;
    const auto inst = random_instance(cfg);
    const double xi = pick_xi(inst);
    const Mat P =
        oracle::riesz_projector(inst.eig, [xi](Complex mu) { return mu.real() > xi; });
    const HalfPlaneContour c = build_contour(inst.op.spectrum, xi, Side::plus);
    const Mat Pq = oracle::riesz_contour(inst.op.dense(), c);
    CHECK((P - Pq).norm() <= 1e-8);
}

TEST_CASE("projector completeness over a curve partition") {
    GeneratorConfig cfg;
    cfg.N = 12;
    cfg.R = 2;
    cfg.seed = 11;
    const auto inst = random_instance(cfg);
    const double xi = pick_xi(inst);
    const Mat T = inst.op.dense();
    const Mat Pp = oracle::riesz_contour(T, build_contour(inst.op.spectrum, xi, Side::plus));
    const Mat Pm = oracle::riesz_contour(T, build_contour(inst.op.spectrum, xi, Side::minus));
    CHECK((Pp + Pm - Mat::Identity(12, 12)).norm() <= 1e-8);
}

TEST_CASE("commutant basis") {
    GeneratorConfig cfg;
    cfg.N = 10;
    cfg.R = 2;
    cfg.seed = 13;
    const auto inst = random_instance(cfg);
    const Mat T = inst.op.dense();
    const auto basis = oracle::commutant_basis(inst.eig);
    CHECK(basis.size() == 10);
    for (const Mat& E : basis) CHECK((E * T - T * E).norm() <= 1e-8 * T.norm() * E.norm());

    oracle::EigenSystem sick = inst.eig;
    sick.near_defective = true;
    CHECK_THROWS_AS(oracle::commutant_basis(sick), Error);
    CHECK_THROWS_AS(oracle::riesz_projector(sick, [](Complex) { return true; }), Error);
}

TEST_CASE("numerical rank") {
    CHECK(oracle::numerical_rank(Mat::Zero(4, 4)) == 0);
    CHECK(oracle::numerical_rank(Mat::Identity(4, 4)) == 4);
    Mat m = Mat::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 1e-12;
    CHECK(oracle::numerical_rank(m) == 1);
    CHECK(oracle::numerical_rank(Mat::Constant(5, 5, Complex(1e-300, 0.0))) == 0);
}

TEST_SUITE_END();
