#pragma once

#include "specidem/generator.hpp"
#include "specidem/idempotent.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace specidem {

/// Instance files: {"lambdas": [[re,im],...], "alpha": [[[re,im],...],...],
/// "beta": [...], "family": {"kind": "geometric"|"power", "params": {...}}}.
/// When "family" carries a kind, the coefficients are regenerated from its
/// closed form (and tail bounds attached); explicit arrays win otherwise.
PerturbedOperator load_instance(const std::string& path);
PerturbedOperator parse_instance(const std::string& json_text);
std::string serialize_instance(const PerturbedOperator& op);

/// FNV-1a over the raw double bit patterns of lambdas, alpha, beta in index
/// order. Stable across runs and platforms with IEEE-754 doubles.
std::uint64_t instance_hash(const PerturbedOperator& op);

/// Row-major complex pairs (re, im) as little-endian binary64, no header.
void dump_matrix(const Mat& m, const std::string& path);
Mat load_matrix(const std::string& path, int rows, int cols);

/// CSV: panel,t,node_re,node_im,weight_re,weight_im at the fixed GL nodes.
void dump_contour_csv(const HalfPlaneContour& contour, int order, std::ostream& out);

/// Result bundle for one computed idempotent (complex scalars as [re, im]).
std::string serialize_bundle(const PerturbedOperator& op, const SpectralIdempotent& idem,
                             double wall_seconds);

}  // namespace specidem
