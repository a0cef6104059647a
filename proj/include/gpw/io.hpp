#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpw/cover.hpp"
#include "gpw/frame.hpp"
#include "gpw/lattice.hpp"
#include "gpw/spectral.hpp"
#include "gpw/spline.hpp"
#include "json.hpp"

namespace gpw::io {

using nlohmann::json;

/// `u v weight` per line, '#' starts a comment, blank lines skipped. A line
/// with two fields means weight 1. Errors carry the 1-based line number.
WeightedGraph parse_edge_list(std::istream& in);
WeightedGraph load_edge_list(const std::string& path);

/// "path:N", "cycle:N", or an edge-list file.
WeightedGraph resolve_graph(const std::string& source);
/// Builtin graph kind when `source` is "path:N" / "cycle:N".
std::optional<std::pair<LatticeKind, std::size_t>> builtin_graph(const std::string& source);

/// "1.5", "-2", "1+2j", "0.5-1e-3j", "3j"
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

/// JSON array of numbers, complex strings or [re, im] pairs.
Signal signal_from_json(const json& j, std::size_t n);
/// `vertex,value` rows; vertices not listed are zero. Optional header row.
Signal parse_signal_csv(std::istream& in, const WeightedGraph& g);
/// .csv by extension, JSON otherwise.
Signal load_signal(const std::string& path, const WeightedGraph& g);

FunctionalKind parse_functional_kind(const std::string& name);

/// {"subsets": [[v,...],...], "functionals": [{"kind": ...}, ...]}
///
/// Functional entries:
///   {"kind": "characteristic"}               chi of S_j
///   {"kind": "characteristic", "subset": [...]}  chi of U_j within S_j
///   {"kind": "normalized"}                   chi_j / sqrt(|S_j|)
///   {"kind": "dirac", "vertex": v}           delta_v, default middle vertex
///   {"kind": "explicit", "weights": {v: value, ...}}
/// A single entry applies to every subset. Without "functionals" the
/// normalized kind is used; `override_kind` replaces kind-only entries.
FunctionalSet functionals_from_json(const json& j, const WeightedGraph& g,
                                    std::optional<FunctionalKind> override_kind = std::nullopt);
FunctionalSet load_cover(const std::string& path, const WeightedGraph& g,
                         std::optional<FunctionalKind> override_kind = std::nullopt);
/// Consecutive triples {3j, 3j+1, 3j+2} in vertex order.
FunctionalSet triple_functionals(const WeightedGraph& g, FunctionalKind kind);

json to_json(const SpectralDecomposition& d, std::optional<double> omega);
json to_json(const InequalityCheck& c);
/// Every check plus the worst margin per inequality name.
json to_json(const InequalityReport& r);
json to_json(const PoincareConstants& k);
json to_json(const FrameCertificate& c);
json to_json(const Discrepancy& d);
json to_json(const LatticeReport& r);
json to_json(const SplineReconstruction& r);

/// Deterministic text: 2-space indent, trailing newline.
std::string dump(const json& j);
void write_text(const std::string& path, const std::string& text);

}  // namespace gpw::io
