#include "specidem/io.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace specidem {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw Error("instance: complex values must be [re, im] pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

json dump_complex(Complex z) { return json::array({z.real(), z.imag()}); }

Mat parse_complex_matrix(const json& j, const char* name) {
    if (!j.is_array() || j.empty()) throw Error(std::string("instance: ") + name + " must be a non-empty array");
    const size_t rows = j.size();
    const size_t cols = j[0].size();
    Mat m(rows, cols);
    for (size_t n = 0; n < rows; ++n) {
        if (!j[n].is_array() || j[n].size() != cols)
            throw Error(std::string("instance: ragged ") + name + " array");
        for (size_t k = 0; k < cols; ++k) m(n, k) = parse_complex(j[n][k]);
    }
    return m;
}

FamilySpec parse_family(const json& j) {
    FamilySpec f;
    f.kind = j.at("kind").get<std::string>();
    const json& p = j.at("params");
    f.c = p.value("c", 1.0);
    f.ratio = p.value("ratio", 0.5);
    f.p = p.value("p", 1.0);
    f.R = p.value("R", 1);
    if (p.contains("acc_re")) f.acc_re = p["acc_re"].get<std::vector<double>>();
    return f;
}

}  // namespace

PerturbedOperator parse_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("instance: JSON parse failure: ") + e.what());
    }

    SpectrumSpec spec;
    const json& jl = j.at("lambdas");
    if (!jl.is_array() || jl.empty()) throw Error("instance: lambdas must be a non-empty array");
    spec.lambdas.resize(jl.size());
    for (size_t n = 0; n < jl.size(); ++n) spec.lambdas[n] = parse_complex(jl[n]);
    spec.a = j.value("a", spec.lambdas.real().minCoeff());
    spec.b = j.value("b", spec.lambdas.real().maxCoeff());
    spec.accumulation_declared = j.value("accumulation_declared", false);
    spec.normalized = j.value("normalized", spec.lambdas.cwiseAbs().maxCoeff() < 1.0);

    CoefficientFamily coeffs;
    if (j.contains("family") && j["family"].contains("kind")) {
        coeffs = make_family(parse_family(j["family"]), spec.size());
    } else {
        coeffs.alpha = parse_complex_matrix(j.at("alpha"), "alpha");
        coeffs.beta = parse_complex_matrix(j.at("beta"), "beta");
    }
    return build_operator(std::move(spec), std::move(coeffs));
}

PerturbedOperator load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("instance: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string serialize_instance(const PerturbedOperator& op) {
    json j;
    j["lambdas"] = json::array();
    for (int n = 0; n < op.dim(); ++n) j["lambdas"].push_back(dump_complex(op.spectrum.lambdas[n]));
    auto dump_mat = [](const Mat& m) {
        json rows = json::array();
        for (int n = 0; n < m.rows(); ++n) {
            json row = json::array();
            for (int k = 0; k < m.cols(); ++k) row.push_back(dump_complex(m(n, k)));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["alpha"] = dump_mat(op.coeffs.alpha);
    j["beta"] = dump_mat(op.coeffs.beta);
    j["a"] = op.spectrum.a;
    j["b"] = op.spectrum.b;
    j["accumulation_declared"] = op.spectrum.accumulation_declared;
    j["normalized"] = op.spectrum.normalized;
    return j.dump(2);
}

std::uint64_t instance_hash(const PerturbedOperator& op) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    for (int n = 0; n < op.dim(); ++n) {
        mix(op.spectrum.lambdas[n].real());
        mix(op.spectrum.lambdas[n].imag());
    }
    for (const Mat* m : {&op.coeffs.alpha, &op.coeffs.beta})
        for (int n = 0; n < m->rows(); ++n)
            for (int k = 0; k < m->cols(); ++k) {
                mix((*m)(n, k).real());
                mix((*m)(n, k).imag());
            }
    return h;
}

void dump_matrix(const Mat& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("dump_matrix: cannot open " + path);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            const double pair[2] = {m(r, c).real(), m(r, c).imag()};
            out.write(reinterpret_cast<const char*>(pair), sizeof pair);
        }
    if (!out) throw Error("dump_matrix: write failure on " + path);
}

Mat load_matrix(const std::string& path, int rows, int cols) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("load_matrix: cannot open " + path);
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double pair[2];
            in.read(reinterpret_cast<char*>(pair), sizeof pair);
            if (!in) throw Error("load_matrix: short read on " + path);
            m(r, c) = Complex(pair[0], pair[1]);
        }
    return m;
}

void dump_contour_csv(const HalfPlaneContour& contour, int order, std::ostream& out) {
    const GaussLegendre& gl = GaussLegendre::get(order);
    out << "panel,t,node_re,node_im,weight_re,weight_im\n";
    for (size_t p = 0; p < contour.panels.size(); ++p) {
        const Panel& panel = contour.panels[p];
        for (size_t i = 0; i < gl.nodes.size(); ++i) {
            const double t = 0.5 + 0.5 * gl.nodes[i];
            const Complex z = panel.point(t);
            const Complex w = 0.5 * gl.weights[i] * panel.deriv(t);
            out << p << ',' << t << ',' << z.real() << ',' << z.imag() << ',' << w.real()
                << ',' << w.imag() << '\n';
        }
    }
}

std::string serialize_bundle(const PerturbedOperator& op, const SpectralIdempotent& idem,
                             double wall_seconds) {
    json j;
    j["instance_hash"] = instance_hash(op);
    j["xi"] = idem.xi;
    j["side"] = side_name(idem.side);
    j["N"] = op.dim();
    j["R"] = op.rank();
    j["residuals"]["idempotency"] = idem.diag.idempotency;
    j["residuals"]["commutation"] = idem.diag.commutation;
    j["residuals"]["quad_error"] = idem.diag.quad_error;
    j["constants"]["C_xi"] = idem.diag.C_xi;
    j["constants"]["C_hat"] = idem.diag.C_hat;
    j["constants"]["M_hat"] = idem.diag.M_hat;
    j["constants"]["core_cond_max"] = idem.diag.core_cond_max;
    j["delta"]["margin"] = idem.delta.margin;
    j["delta"]["wsum_alpha"] = idem.delta.wsum_alpha;
    j["delta"]["wsum_beta"] = idem.delta.wsum_beta;
    j["delta"]["eig_clearance"] = idem.delta.eig_clearance;
    j["delta"]["accept"] = idem.delta.accept;
    j["evaluations"] = idem.diag.evaluations;
    j["quad_converged"] = idem.diag.quad_converged;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2);
}

}  // namespace specidem
