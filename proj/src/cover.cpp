#include "gpw/cover.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "gpw/error.hpp"

namespace gpw {
namespace {

std::string describe_subset(const WeightedGraph& g, std::size_t j, const VertexSet& s) {
  std::ostringstream os;
  os << "S_" << j << " = {";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << g.label(s[i]);
  os << "}";
  return os.str();
}

// (rhs - lhs) / max(lhs, rhs); both sides are nonnegative here.
double relative_margin(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale <= 1e-300) return 0.0;
  return (rhs - lhs) / scale;
}

}  // namespace

Signal Cover::restrict(std::size_t j, const Signal& f) const {
  const VertexSet& s = subsets.at(j);
  Signal out(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) out(static_cast<Eigen::Index>(i)) = f(static_cast<Eigen::Index>(s[i]));
  return out;
}

Cover build_cover(const WeightedGraph& g, std::vector<VertexSet> subsets) {
  const std::size_t n = g.size();
  std::vector<std::size_t> covered(n, 0);
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    VertexSet& s = subsets[j];
    for (std::size_t v : s)
      if (v >= n) throw CoverError(CoverClause::unknown_vertex, "index " + std::to_string(v) + " in S_" + std::to_string(j));
    VertexSet sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(Errc::invalid_cover, "repeated vertex in " + describe_subset(g, j, s));
    if (s.size() < 2) throw CoverError(CoverClause::singleton, describe_subset(g, j, s));
    for (std::size_t v : s) ++covered[v];
  }

  std::string missing;
  for (std::size_t v = 0; v < n; ++v)
    if (covered[v] == 0) missing += (missing.empty() ? "'" : ", '") + g.label(v) + "'";
  if (!missing.empty()) throw CoverError(CoverClause::union_incomplete, "missing vertices " + missing);

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> owner;
  std::vector<char> member(n, 0);
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    for (std::size_t v : subsets[j]) member[v] = 1;
    for (const auto& e : g.edges()) {
      if (!member[e.u] || !member[e.v]) continue;
      auto [it, inserted] = owner.emplace(std::make_pair(e.u, e.v), j);
      if (!inserted)
        throw CoverError(CoverClause::shared_edge, "edge (" + g.label(e.u) + "," + g.label(e.v) + ") lies in S_" +
                                                       std::to_string(it->second) + " and S_" + std::to_string(j));
    }
    for (std::size_t v : subsets[j]) member[v] = 0;
  }

  Cover c;
  c.graph = g;
  c.multiplicity = *std::max_element(covered.begin(), covered.end());
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    WeightedGraph sub = induced_subgraph(g, subsets[j]);
    if (!is_connected(sub)) throw CoverError(CoverClause::disconnected, describe_subset(g, j, subsets[j]));
    SpectralDecomposition d = decompose(sub);
    const auto l1 = d.first_nonzero();
    if (!l1) throw CoverError(CoverClause::disconnected, describe_subset(g, j, subsets[j]) + " has no nonzero eigenvalue");
    c.lambda1.push_back(*l1);
    c.induced.push_back(std::move(sub));
    c.induced_spectra.push_back(std::move(d));
  }
  c.subsets = std::move(subsets);
  return c;
}

Cover build_cover(const WeightedGraph& g, const std::vector<std::vector<std::string>>& subsets) {
  std::vector<VertexSet> idx;
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    VertexSet s;
    for (const auto& label : subsets[j]) {
      auto v = g.find(label);
      if (!v) throw CoverError(CoverClause::unknown_vertex, "'" + label + "' in S_" + std::to_string(j));
      s.push_back(*v);
    }
    idx.push_back(std::move(s));
  }
  return build_cover(g, std::move(idx));
}

const char* to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::characteristic: return "characteristic";
    case FunctionalKind::normalized: return "normalized";
    case FunctionalKind::dirac: return "dirac";
    case FunctionalKind::explicit_weights: return "explicit";
  }
  return "?";
}

double theta_of(const Signal& psi, const VertexSet& support_set) {
  cplx total = 0.0;
  for (std::size_t v : support_set) total += std::conj(psi(static_cast<Eigen::Index>(v)));
  const double denom = std::norm(total);
  if (denom == 0.0) throw Error(Errc::invalid_argument, "weight function sums to zero on its subset");
  return static_cast<double>(support_set.size()) * norm_squared(psi) / denom;
}

cplx FunctionalSet::total(std::size_t j) const {
  cplx t = 0.0;
  for (std::size_t v : cover.subsets.at(j)) t += std::conj(weights.at(j)(static_cast<Eigen::Index>(v)));
  return t;
}

double FunctionalSet::theta(std::size_t j) const { return theta_of(weights.at(j), cover.subsets.at(j)); }

FunctionalSet make_functionals(Cover cover, std::vector<Signal> weights, FunctionalKind kind) {
  if (weights.size() != cover.count())
    throw Error(Errc::invalid_argument, "need one weight function per subset (" + std::to_string(cover.count()) +
                                            "), got " + std::to_string(weights.size()));
  const std::size_t n = cover.graph.size();
  std::vector<char> member(n, 0);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    require_same_size(cover.graph, weights[j]);
    for (std::size_t v : cover.subsets[j]) member[v] = 1;
    for (std::size_t v = 0; v < n; ++v)
      if (!member[v] && weights[j](static_cast<Eigen::Index>(v)) != cplx(0.0))
        throw Error(Errc::invalid_argument, "psi_" + std::to_string(j) + " is nonzero at vertex '" +
                                                cover.graph.label(v) + "' outside S_" + std::to_string(j));
    for (std::size_t v : cover.subsets[j]) member[v] = 0;
  }
  FunctionalSet fs{std::move(cover), std::move(weights), kind};
  for (std::size_t j = 0; j < fs.count(); ++j)
    if (fs.total(j) == cplx(0.0))
      throw Error(Errc::invalid_argument, "Psi_" + std::to_string(j) + "(chi_" + std::to_string(j) + ") = 0");
  return fs;
}

Signal functional_characteristic(const Cover& c, std::size_t j, const VertexSet& subset) {
  if (subset.empty()) throw Error(Errc::invalid_argument, "characteristic functional needs a nonempty U_j");
  const VertexSet& s = c.subsets.at(j);
  Signal psi = Signal::Zero(static_cast<Eigen::Index>(c.graph.size()));
  for (std::size_t v : subset) {
    if (std::find(s.begin(), s.end(), v) == s.end())
      throw Error(Errc::invalid_argument, "U_" + std::to_string(j) + " is not contained in S_" + std::to_string(j));
    psi(static_cast<Eigen::Index>(v)) = 1.0;
  }
  return psi;
}

Signal functional_normalized(const Cover& c, std::size_t j) {
  const VertexSet& s = c.subsets.at(j);
  Signal psi = Signal::Zero(static_cast<Eigen::Index>(c.graph.size()));
  const double w = 1.0 / std::sqrt(static_cast<double>(s.size()));
  for (std::size_t v : s) psi(static_cast<Eigen::Index>(v)) = w;
  return psi;
}

Signal functional_dirac(const Cover& c, std::size_t j, std::size_t v) {
  const VertexSet& s = c.subsets.at(j);
  if (std::find(s.begin(), s.end(), v) == s.end())
    throw Error(Errc::invalid_argument, "Dirac vertex not in S_" + std::to_string(j));
  Signal psi = Signal::Zero(static_cast<Eigen::Index>(c.graph.size()));
  psi(static_cast<Eigen::Index>(v)) = 1.0;
  return psi;
}

FunctionalSet characteristic_functionals(Cover c) {
  std::vector<Signal> w;
  for (std::size_t j = 0; j < c.count(); ++j) w.push_back(functional_characteristic(c, j, c.subsets[j]));
  return make_functionals(std::move(c), std::move(w), FunctionalKind::characteristic);
}

FunctionalSet normalized_functionals(Cover c) {
  std::vector<Signal> w;
  for (std::size_t j = 0; j < c.count(); ++j) w.push_back(functional_normalized(c, j));
  return make_functionals(std::move(c), std::move(w), FunctionalKind::normalized);
}

FunctionalSet dirac_functionals(Cover c) {
  std::vector<std::size_t> at;
  for (const auto& s : c.subsets) at.push_back(s[s.size() / 2]);
  return dirac_functionals(std::move(c), at);
}

FunctionalSet dirac_functionals(Cover c, const std::vector<std::size_t>& vertices) {
  if (vertices.size() != c.count()) throw Error(Errc::invalid_argument, "need one Dirac vertex per subset");
  std::vector<Signal> w;
  for (std::size_t j = 0; j < c.count(); ++j) w.push_back(functional_dirac(c, j, vertices[j]));
  return make_functionals(std::move(c), std::move(w), FunctionalKind::dirac);
}

Eigen::VectorXcd analyze(const FunctionalSet& fs, const Signal& f) {
  require_same_size(fs.cover.graph, f);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(fs.count()));
  for (std::size_t j = 0; j < fs.count(); ++j) out(static_cast<Eigen::Index>(j)) = inner(f, fs.weights[j]);
  return out;
}

PoincareConstants poincare_constants(const FunctionalSet& fs) {
  if (fs.count() == 0) throw Error(Errc::invalid_argument, "empty functional set");
  PoincareConstants k;
  k.lambda_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < fs.count(); ++j) {
    const double total2 = std::norm(fs.total(j));
    if (total2 == 0.0) throw Error(Errc::invalid_argument, "Psi_" + std::to_string(j) + "(chi_j) = 0");
    const double size = static_cast<double>(fs.cover.subsets[j].size());
    const double psi2 = norm_squared(fs.weights[j]);
    k.theta.push_back(size * psi2 / total2);
    k.lambda1.push_back(fs.cover.lambda1[j]);
    k.theta_max = std::max(k.theta_max, k.theta.back());
    k.lambda_min = std::min(k.lambda_min, fs.cover.lambda1[j]);
    k.c = std::max(k.c, size * size / total2);
    k.C = std::max(k.C, psi2);
  }
  return k;
}

InequalityCheck make_check(std::string name, double lhs, double rhs, std::optional<double> eps) {
  InequalityCheck c;
  c.name = std::move(name);
  c.epsilon = eps;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = relative_margin(lhs, rhs);
  c.holds = c.margin >= -kMarginTolerance;
  return c;
}

bool InequalityReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.holds; });
}

double InequalityReport::worst_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) m = std::min(m, c.margin);
  return m;
}

void InequalityReport::append(const InequalityReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  cover_multiplicity = std::max(cover_multiplicity, other.cover_multiplicity);
}

Eigen::MatrixXcd gram_schmidt(const Eigen::MatrixXcd& columns, double drop_tol) {
  Eigen::MatrixXcd q(columns.rows(), 0);
  for (Eigen::Index k = 0; k < columns.cols(); ++k) {
    Eigen::VectorXcd v = columns.col(k);
    const double original = v.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < q.cols(); ++i) v -= q.col(i) * q.col(i).dot(v);
    const double r = v.norm();
    if (r <= drop_tol * original) continue;
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = v / r;
  }
  return q;
}

// ---------------------------------------------------------------------------

SingleSetPoincare::SingleSetPoincare(const WeightedGraph& g, Signal psi)
    : SingleSetPoincare(g, std::move(psi), decompose(g)) {}

SingleSetPoincare::SingleSetPoincare(const WeightedGraph& g, Signal psi, const SpectralDecomposition& d)
    : graph_(g), psi_(std::move(psi)) {
  init(d);
}

void SingleSetPoincare::init(const SpectralDecomposition& d) {
  require_same_size(graph_, psi_);
  if (graph_.size() < 2) throw Error(Errc::invalid_argument, "Poincare inequality needs at least two vertices");
  if (!is_connected(graph_)) throw Error(Errc::invalid_argument, "Poincare inequality needs a connected graph");
  total_ = inner(constant_signal(graph_.size()), psi_);
  if (total_ == cplx(0.0)) throw Error(Errc::invalid_argument, "Psi(chi_G) = 0");
  VertexSet all(graph_.size());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
  theta_ = theta_of(psi_, all);
  lambda1_ = *d.first_nonzero();
}

InequalityReport SingleSetPoincare::verify(const Signal& f, const std::vector<double>& epsilons) const {
  require_same_size(graph_, f);
  InequalityReport r;
  const double n = static_cast<double>(graph_.size());
  const double ratio = theta_ / lambda1_;
  const Signal chi = constant_signal(graph_.size());
  const double grad2 = dirichlet_energy(graph_, f);
  const cplx sample = inner(f, psi_);

  // f projected orthogonally onto Ker(Psi)
  const Signal fk = f - (sample / norm_squared(psi_)) * psi_;
  r.checks.push_back(make_check("kernel", norm_squared(fk), ratio * dirichlet_energy(graph_, fk)));

  const Signal centered = f - (sample / total_) * chi;
  r.checks.push_back(make_check("centered", norm_squared(centered), ratio * grad2));

  const cplx mean = f.sum() / n;
  r.checks.push_back(make_check("mean_value", norm_squared(f - mean * chi), grad2 / lambda1_));

  const double sample_term = n * n / std::norm(total_) * std::norm(sample);
  const double f2 = norm_squared(f);
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "epsilon must be positive");
    r.checks.push_back(
        make_check("one_set", f2, ratio * (1.0 + eps) * grad2 + (1.0 + eps) / eps * sample_term, eps));
  }
  return r;
}

InequalityReport verify_single_poincare(const WeightedGraph& g, const Signal& psi, const Signal& f,
                                        const std::vector<double>& epsilons) {
  return SingleSetPoincare(g, psi).verify(f, epsilons);
}

// ---------------------------------------------------------------------------

CoverPoincare::CoverPoincare(const FunctionalSet& fs, std::optional<std::vector<std::size_t>> j0)
    : fs_(fs), constants_(poincare_constants(fs)) {
  for (std::size_t j = 0; j < fs_.count(); ++j) {
    const double size = static_cast<double>(fs_.cover.subsets[j].size());
    sample_factor_.push_back(size * size / std::norm(fs_.total(j)));
  }
  const auto n = static_cast<Eigen::Index>(fs_.cover.graph.size());
  Eigen::MatrixXcd psis(n, static_cast<Eigen::Index>(fs_.count()));
  for (std::size_t j = 0; j < fs_.count(); ++j) psis.col(static_cast<Eigen::Index>(j)) = fs_.weights[j];
  span_basis_ = gram_schmidt(psis);

  if (j0) {
    j0_ = *j0;
  } else {
    for (std::size_t j = 0; j < (fs_.count() + 1) / 2; ++j) j0_.push_back(j);
  }
  if (j0_.empty()) throw Error(Errc::invalid_argument, "J0 must be nonempty");
  std::vector<char> in_g0(fs_.cover.graph.size(), 0);
  Eigen::MatrixXcd psis0(n, static_cast<Eigen::Index>(j0_.size()));
  for (std::size_t i = 0; i < j0_.size(); ++i) {
    const std::size_t j = j0_[i];
    if (j >= fs_.count()) throw Error(Errc::invalid_argument, "J0 index " + std::to_string(j) + " out of range");
    psis0.col(static_cast<Eigen::Index>(i)) = fs_.weights[j];
    for (std::size_t v : fs_.cover.subsets[j]) in_g0[v] = 1;
  }
  span_basis_j0_ = gram_schmidt(psis0);
  for (std::size_t v = 0; v < in_g0.size(); ++v)
    if (in_g0[v]) g0_vertices_.push_back(v);
  g0_ = induced_subgraph(fs_.cover.graph, g0_vertices_);
}

namespace {
// Residuals at rounding level are snapped to zero so that the trivial case
// 0 <= 0 is not judged on noise.
Signal project_out(const Eigen::MatrixXcd& q, const Signal& f) {
  Signal z = f - q * (q.adjoint() * f);
  if (z.norm() <= 1e-12 * f.norm()) z.setZero();
  return z;
}
}  // namespace

Signal CoverPoincare::project_joint_kernel(const Signal& f) const { return project_out(span_basis_, f); }

Signal CoverPoincare::project_subfamily_kernel(const Signal& f) const { return project_out(span_basis_j0_, f); }

InequalityReport CoverPoincare::verify(const Signal& f, const std::vector<double>& epsilons) const {
  const Cover& cover = fs_.cover;
  require_same_size(cover.graph, f);
  InequalityReport r;
  r.cover_multiplicity = cover.multiplicity;
  const auto& k = constants_;
  const double global_ratio = k.theta_max / k.lambda_min;

  // Per-subset pieces: ||f_j||^2, theta_j / lambda_{1,j} ||grad_j f_j||^2, sample term.
  auto local_terms = [&](const Signal& g, const std::vector<std::size_t>* only) {
    struct Terms {
      double restricted_norm2 = 0, weighted_grad = 0, grad = 0, samples = 0;
    } t;
    auto visit = [&](std::size_t j) {
      const Signal gj = cover.restrict(j, g);
      const double e = dirichlet_energy(cover.induced[j], gj);
      t.restricted_norm2 += norm_squared(gj);
      t.grad += e;
      t.weighted_grad += k.theta[j] / k.lambda1[j] * e;
      t.samples += sample_factor_[j] * std::norm(inner(g, fs_.weights[j]));
    };
    if (only)
      for (std::size_t j : *only) visit(j);
    else
      for (std::size_t j = 0; j < fs_.count(); ++j) visit(j);
    return t;
  };

  const double f2 = norm_squared(f);
  const auto terms = local_terms(f, nullptr);
  // ||L^{1/2} f||^2 = <f, Lf> on the parent graph
  const double energy = std::max(0.0, inner(f, laplacian_apply(cover.graph, f)).real());

  r.checks.push_back(make_check("cover_decomposition", f2, terms.restricted_norm2));
  r.checks.push_back(make_check("gradient_superadditivity", terms.grad, energy));

  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "epsilon must be positive");
    const double sample_part = (1.0 + eps) / eps * terms.samples;
    r.checks.push_back(make_check("local", f2, (1.0 + eps) * terms.weighted_grad + sample_part, eps));
    r.checks.push_back(make_check("global", f2, (1.0 + eps) * global_ratio * energy + sample_part, eps));
  }

  const Signal z = project_joint_kernel(f);
  const auto zt = local_terms(z, nullptr);
  const double z_energy = std::max(0.0, inner(z, laplacian_apply(cover.graph, z)).real());
  r.checks.push_back(make_check("many_zeros_local", norm_squared(z), zt.weighted_grad));
  r.checks.push_back(make_check("many_zeros_global", norm_squared(z), global_ratio * z_energy));

  const Signal z0 = project_subfamily_kernel(f);
  const auto z0t = local_terms(z0, &j0_);
  Signal z0_local(static_cast<Eigen::Index>(g0_vertices_.size()));
  for (std::size_t i = 0; i < g0_vertices_.size(); ++i)
    z0_local(static_cast<Eigen::Index>(i)) = z0(static_cast<Eigen::Index>(g0_vertices_[i]));
  const double z0_norm2 = norm_squared(z0_local);
  const double z0_energy = std::max(0.0, inner(z0_local, laplacian_apply(g0_, z0_local)).real());
  r.checks.push_back(make_check("many_zeros_local_subgraph", z0_norm2, z0t.weighted_grad));
  r.checks.push_back(make_check("many_zeros_global_subgraph", z0_norm2, global_ratio * z0_energy));
  return r;
}

InequalityReport verify_cover_poincare(const FunctionalSet& fs, const Signal& f, double epsilon,
                                       std::optional<std::vector<std::size_t>> j0) {
  if (!(epsilon > 0.0)) throw Error(Errc::invalid_argument, "epsilon must be positive");
  return CoverPoincare(fs, std::move(j0)).verify(f, {epsilon});
}

}  // namespace gpw
