#include "gpw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "gpw/error.hpp"

namespace gpw {

std::optional<std::size_t> WeightedGraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t WeightedGraph::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw Error(Errc::invalid_argument, "unknown vertex '" + std::string(label) + "'");
}

double WeightedGraph::weight(std::size_t u, std::size_t v) const {
  if (u == v) return 0.0;
  const auto a = static_cast<std::uint32_t>(u), b = static_cast<std::uint32_t>(v);
  auto it = weights_.find({std::min(a, b), std::max(a, b)});
  return it == weights_.end() ? 0.0 : it->second;
}

double WeightedGraph::max_degree() const noexcept {
  double m = 0.0;
  for (double d : degree_) m = std::max(m, d);
  return m;
}

kernels::CsrView WeightedGraph::csr() const noexcept { return {row_ptr_, col_, csr_weight_, degree_}; }

kernels::EdgeView WeightedGraph::edge_view() const noexcept { return {eu_, ev_, ew_}; }

Eigen::MatrixXd WeightedGraph::dense_laplacian() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges_) {
    lap(e.u, e.v) -= e.weight;
    lap(e.v, e.u) -= e.weight;
    lap(e.u, e.u) += e.weight;
    lap(e.v, e.v) += e.weight;
  }
  return lap;
}

WeightedGraph WeightedGraph::assemble(std::vector<std::string> labels, std::vector<Edge> edges) {
  WeightedGraph g;
  g.labels_ = std::move(labels);
  for (std::size_t i = 0; i < g.labels_.size(); ++i) g.index_.emplace(g.labels_[i], i);
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  g.edges_ = std::move(edges);

  const std::size_t n = g.labels_.size();
  g.degree_.assign(n, 0.0);
  std::vector<std::uint32_t> count(n, 0);
  for (const Edge& e : g.edges_) {
    g.weights_.emplace(std::make_pair(e.u, e.v), e.weight);
    g.degree_[e.u] += e.weight;
    g.degree_[e.v] += e.weight;
    ++count[e.u];
    ++count[e.v];
    g.eu_.push_back(e.u);
    g.ev_.push_back(e.v);
    g.ew_.push_back(e.weight);
  }
  g.row_ptr_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.row_ptr_[v + 1] = g.row_ptr_[v] + count[v];
  g.col_.resize(g.row_ptr_[n]);
  g.csr_weight_.resize(g.row_ptr_[n]);
  std::vector<std::uint32_t> fill(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.col_[fill[e.u]] = e.v;
    g.csr_weight_[fill[e.u]++] = e.weight;
    g.col_[fill[e.v]] = e.u;
    g.csr_weight_[fill[e.v]++] = e.weight;
  }
  return g;
}

WeightedGraph build_graph(std::span<const EdgeSpec> edges, std::span<const std::string> vertices) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, std::uint32_t> index;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = index.emplace(label, static_cast<std::uint32_t>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };
  for (const std::string& v : vertices) {
    if (index.count(v)) throw Error(Errc::invalid_argument, "duplicate vertex identifier '" + v + "'");
    intern(v);
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> weights;
  for (const EdgeSpec& e : edges) {
    if (!std::isfinite(e.weight)) throw Error(Errc::invalid_argument, "non-finite weight on (" + e.u + "," + e.v + ")");
    if (e.weight < 0.0) throw Error(Errc::invalid_argument, "negative weight on (" + e.u + "," + e.v + ")");
    const std::uint32_t a = intern(e.u);
    const std::uint32_t b = intern(e.v);
    if (a == b) {
      if (e.weight != 0.0) throw Error(Errc::invalid_argument, "self-loop with nonzero weight at " + e.u);
      continue;
    }
    const auto key = std::minmax(a, b);
    auto [it, inserted] = weights.emplace(std::make_pair(key.first, key.second), e.weight);
    if (!inserted && it->second != e.weight)
      throw Error(Errc::invalid_argument, "conflicting duplicate weights for (" + e.u + "," + e.v + ")");
  }

  std::vector<WeightedGraph::Edge> list;
  for (const auto& [key, w] : weights)
    if (w != 0.0) list.push_back({key.first, key.second, w});
  return WeightedGraph::assemble(std::move(labels), std::move(list));
}

void require_same_size(const WeightedGraph& g, const Signal& f) {
  if (static_cast<std::size_t>(f.size()) != g.size())
    throw Error(Errc::invalid_argument, "signal has " + std::to_string(f.size()) + " entries, graph has " +
                                            std::to_string(g.size()) + " vertices");
}

Signal laplacian_apply(const WeightedGraph& g, const Signal& f) {
  require_same_size(g, f);
  Signal out(f.size());
  kernels::active().laplacian(g.csr(), f.data(), out.data());
  return out;
}

double dirichlet_energy(const WeightedGraph& g, const Signal& f) {
  require_same_size(g, f);
  // The 1/2 in the ordered double sum cancels the double count of each edge.
  return kernels::active().edge_energy(g.edge_view(), f.data());
}

double gradient_norm(const WeightedGraph& g, const Signal& f) { return std::sqrt(dirichlet_energy(g, f)); }

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error(Errc::invalid_argument, "induced subgraph of an empty subset");
  std::vector<std::uint32_t> local(g.size(), std::numeric_limits<std::uint32_t>::max());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const std::size_t v = subset[i];
    if (v >= g.size()) throw Error(Errc::invalid_argument, "vertex index " + std::to_string(v) + " out of range");
    if (local[v] != std::numeric_limits<std::uint32_t>::max())
      throw Error(Errc::invalid_argument, "vertex '" + g.label(v) + "' repeated in subset");
    local[v] = static_cast<std::uint32_t>(i);
    labels.push_back(g.label(v));
  }
  std::vector<WeightedGraph::Edge> edges;
  for (const auto& e : g.edges()) {
    const std::uint32_t a = local[e.u], b = local[e.v];
    if (a == std::numeric_limits<std::uint32_t>::max() || b == std::numeric_limits<std::uint32_t>::max()) continue;
    edges.push_back({std::min(a, b), std::max(a, b), e.weight});
  }
  return WeightedGraph::assemble(std::move(labels), std::move(edges));
}

WeightedGraph induced_subgraph(const WeightedGraph& g, std::span<const std::string> labels) {
  std::vector<std::size_t> subset;
  subset.reserve(labels.size());
  for (const auto& l : labels) subset.push_back(g.index(l));
  return induced_subgraph(g, subset);
}

bool is_connected(const WeightedGraph& g) {
  const std::size_t n = g.size();
  if (n == 0) return false;
  const auto csr = g.csr();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::uint32_t k = csr.row_ptr[v]; k < csr.row_ptr[v + 1]; ++k) {
      const std::uint32_t u = csr.col[k];
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        q.push(u);
      }
    }
  }
  return reached == n;
}

Signal constant_signal(std::size_t n, cplx value) {
  return Signal::Constant(static_cast<Eigen::Index>(n), value);
}

}  // namespace gpw
