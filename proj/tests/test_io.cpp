#include "helpers.hpp"
#include "specidem/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace specidem;

TEST_SUITE_BEGIN("io");

TEST_CASE("instance serialization round trip") {
    GeneratorConfig cfg;
    cfg.N = 12;
    cfg.R = 2;
    cfg.seed = 107;
    const PerturbedOperator op = random_instance(cfg).op;
    const PerturbedOperator back = parse_instance(serialize_instance(op));
    CHECK((back.dense() - op.dense()).norm() == 0.0);
    CHECK(instance_hash(back) == instance_hash(op));
    CHECK(back.spectrum.a == op.spectrum.a);
    CHECK(back.spectrum.normalized == op.spectrum.normalized);
}

TEST_CASE("hash is sensitive to every field") {
    GeneratorConfig cfg;
    cfg.N = 8;
    cfg.seed = 109;
    cfg.R = 1;
    const PerturbedOperator op = random_instance(cfg).op;
    PerturbedOperator tweaked = op;
    tweaked.coeffs.alpha(3, 0) += 1e-15;
    CHECK(instance_hash(tweaked) != instance_hash(op));
    tweaked = op;
    tweaked.spectrum.lambdas[0] += Complex(0.0, 1e-15);
    CHECK(instance_hash(tweaked) != instance_hash(op));
}

TEST_CASE("malformed JSON raises a parse error") {
    CHECK_THROWS_WITH_AS(parse_instance("{ not json"), doctest::Contains("parse"), Error);
    CHECK_THROWS_AS(parse_instance("{\"lambdas\": [[0.1]]}"), Error);
    CHECK_THROWS_AS(parse_instance("{\"lambdas\": []}"), Error);
}

TEST_CASE("family instances regenerate coefficients with tails") {
    const std::string text = R"({
        "lambdas": [[0.5,0],[-0.5,0],[0.5,0],[-0.5,0]],
        "family": {"kind": "geometric", "params": {"c": 0.4, "ratio": 0.5, "R": 1}}
    })";
    const PerturbedOperator op = parse_instance(text);
    CHECK(op.rank() == 1);
    REQUIRE(op.coeffs.tail.has_value());
    CHECK(op.coeffs.tail->logsum.has_value());
    CHECK(std::abs(op.coeffs.alpha(0, 0) - Complex(0.2, 0.0)) <= 1e-15);
}

TEST_CASE("binary matrix dump round trip") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "specidem_test_J.bin").string();
    const Mat m = Mat::Random(5, 7);
    dump_matrix(m, path);
    const Mat back = load_matrix(path, 5, 7);
    CHECK((back - m).norm() == 0.0);
    CHECK_THROWS_AS(load_matrix(path, 8, 8), Error);
    std::remove(path.c_str());
}

TEST_CASE("contour CSV layout") {
    SpectrumSpec spec;
    spec.lambdas = Vec::Constant(1, Complex(0.5, 0.2));
    const HalfPlaneContour c = build_contour(spec, 0.0, Side::plus);
    std::ostringstream out;
    dump_contour_csv(c, 8, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "panel,t,node_re,node_im,weight_re,weight_im");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4 * 8);
}

TEST_CASE("result bundle carries the diagnostics") {
    GeneratorConfig cfg;
    cfg.N = 10;
    cfg.R = 1;
    cfg.seed = 113;
    const auto inst = random_instance(cfg);
    const double xi = pick_xi(inst);
    const SpectralIdempotent j = half_plane_idempotent(inst.op, xi, Side::plus);
    const std::string text = serialize_bundle(inst.op, j, 0.25);
    CHECK(text.find("instance_hash") != std::string::npos);
    CHECK(text.find("idempotency") != std::string::npos);
    CHECK(text.find("M_hat") != std::string::npos);
    CHECK(text.find("\"side\": \"plus\"") != std::string::npos);
}

TEST_SUITE_END();
