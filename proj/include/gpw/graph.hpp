#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gpw/kernels.hpp"

namespace gpw {

using cplx = std::complex<double>;

/// A complex-valued function on the vertices, indexed like the owning graph.
using Signal = Eigen::VectorXcd;

/// One input edge. Vertex identifiers are arbitrary strings; integer
/// identifiers are converted with std::to_string.
struct EdgeSpec {
  std::string u;
  std::string v;
  double weight = 1.0;

  EdgeSpec(std::string a, std::string b, double w) : u(std::move(a)), v(std::move(b)), weight(w) {}
  EdgeSpec(long long a, long long b, double w) : u(std::to_string(a)), v(std::to_string(b)), weight(w) {}
};

/// Finite undirected graph with symmetric nonnegative weights and no loops.
///
/// Vertices carry string labels mapped to dense indices 0..N-1. Edges are
/// stored once under the canonical key (min, max); the adjacency is kept in
/// CSR form for the Laplacian kernels. Immutable after construction.
class WeightedGraph {
 public:
  struct Edge {
    std::uint32_t u;  // u < v
    std::uint32_t v;
    double weight;
  };

  WeightedGraph() = default;

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t v) const { return labels_.at(v); }
  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws gpw::Error when the label is unknown.
  std::size_t index(std::string_view label) const;

  /// w(u,v); zero when there is no edge.
  double weight(std::size_t u, std::size_t v) const;
  double degree(std::size_t v) const { return degree_.at(v); }
  double max_degree() const noexcept;
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  kernels::CsrView csr() const noexcept;
  kernels::EdgeView edge_view() const noexcept;

  Eigen::MatrixXd dense_laplacian() const;

 private:
  friend WeightedGraph build_graph(std::span<const EdgeSpec>, std::span<const std::string>);
  friend WeightedGraph induced_subgraph(const WeightedGraph&, std::span<const std::size_t>);
  static WeightedGraph assemble(std::vector<std::string> labels, std::vector<Edge> edges);

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;  // sorted by (u, v)
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> weights_;
  std::vector<double> degree_;
  std::vector<std::uint32_t> row_ptr_, col_;
  std::vector<double> csr_weight_;
  std::vector<std::uint32_t> eu_, ev_;
  std::vector<double> ew_;
};

/// Builds a graph from an edge list. A one-directional entry implies its
/// mirror; a repeated pair must repeat the same weight. Zero-weight entries
/// register their endpoints without creating an edge. `vertices` fixes the
/// leading vertex order (and admits isolated vertices); other vertices follow
/// in order of first appearance.
WeightedGraph build_graph(std::span<const EdgeSpec> edges, std::span<const std::string> vertices = {});
inline WeightedGraph build_graph(std::initializer_list<EdgeSpec> edges) {
  return build_graph(std::span<const EdgeSpec>(edges.begin(), edges.size()));
}

/// (Lf)(v) = sum_u (f(v) - f(u)) w(v,u)
Signal laplacian_apply(const WeightedGraph& g, const Signal& f);

/// (sum_{u,v} 1/2 |f(u) - f(v)|^2 w(u,v))^{1/2}
double gradient_norm(const WeightedGraph& g, const Signal& f);

/// Squared gradient norm (the Dirichlet energy).
double dirichlet_energy(const WeightedGraph& g, const Signal& f);

/// Graph induced on `subset` (parent indices). Vertex i of the result is
/// parent vertex subset[i]; labels are carried over.
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const std::size_t> subset);
WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const std::string> labels);

bool is_connected(const WeightedGraph& g);

inline cplx inner(const Signal& f, const Signal& g) {
  return kernels::dot({f.data(), static_cast<std::size_t>(f.size())},
                      {g.data(), static_cast<std::size_t>(g.size())});
}
inline double norm_squared(const Signal& f) {
  return kernels::norm2({f.data(), static_cast<std::size_t>(f.size())});
}

Signal constant_signal(std::size_t n, cplx value = 1.0);

/// Throws when f is not indexed like g.
void require_same_size(const WeightedGraph& g, const Signal& f);

}  // namespace gpw
