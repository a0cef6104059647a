#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpw/graph.hpp"
#include "gpw/spectral.hpp"

namespace gpw {

using VertexSet = std::vector<std::size_t>;

/// Family {S_j} of connected vertex subsets covering V(G) with no edge of G
/// inside two different subsets. Vertices may be shared. Each subset keeps
/// its induced graph, that graph's spectrum and its first nonzero eigenvalue.
struct Cover {
  WeightedGraph graph;
  std::vector<VertexSet> subsets;  // parent indices, in the order given
  std::vector<WeightedGraph> induced;
  std::vector<SpectralDecomposition> induced_spectra;
  std::vector<double> lambda1;  // first nonzero eigenvalue of each induced graph
  std::size_t multiplicity = 1;  // max number of subsets containing one vertex

  std::size_t count() const noexcept { return subsets.size(); }
  bool vertex_disjoint() const noexcept { return multiplicity == 1; }
  /// f restricted to S_j, indexed like induced[j].
  Signal restrict(std::size_t j, const Signal& f) const;
};

/// Validates the cover assumption and computes per-subset spectra.
/// Throws CoverError naming the violated clause and the offending
/// vertices, edge or subset.
Cover build_cover(const WeightedGraph& g, std::vector<VertexSet> subsets);
Cover build_cover(const WeightedGraph& g, const std::vector<std::vector<std::string>>& subsets);

enum class FunctionalKind { characteristic, normalized, dirac, explicit_weights };
const char* to_string(FunctionalKind k);

/// Weight functions psi_j supported in S_j; Psi_j(f) = <f, psi_j>.
struct FunctionalSet {
  Cover cover;
  std::vector<Signal> weights;  // full-length psi_j, zero outside S_j
  FunctionalKind kind = FunctionalKind::explicit_weights;

  std::size_t count() const noexcept { return weights.size(); }
  /// Psi_j(chi_j) = <chi_j, psi_j>
  cplx total(std::size_t j) const;
  /// theta_j = |S_j| ||psi_j||^2 / |Psi_j(chi_j)|^2
  double theta(std::size_t j) const;
};

/// Checks support(psi_j) within S_j and Psi_j(chi_j) != 0.
FunctionalSet make_functionals(Cover cover, std::vector<Signal> weights,
                               FunctionalKind kind = FunctionalKind::explicit_weights);

/// psi_j = chi of U_j, U_j a nonempty subset of S_j.
Signal functional_characteristic(const Cover& c, std::size_t j, const VertexSet& subset);
/// psi_j = chi_j / sqrt(|S_j|)
Signal functional_normalized(const Cover& c, std::size_t j);
/// psi_j = delta at v, v in S_j.
Signal functional_dirac(const Cover& c, std::size_t j, std::size_t v);

FunctionalSet characteristic_functionals(Cover c);
FunctionalSet normalized_functionals(Cover c);
/// Dirac functional at the middle listed vertex of each subset.
FunctionalSet dirac_functionals(Cover c);
FunctionalSet dirac_functionals(Cover c, const std::vector<std::size_t>& vertices);

/// |S| ‖psi‖² / |<chi_S, psi>|² for a weight function on the vertex set S.
double theta_of(const Signal& psi, const VertexSet& support_set);

/// {Psi_j(f)}_j
Eigen::VectorXcd analyze(const FunctionalSet& fs, const Signal& f);

struct PoincareConstants {
  double theta_max = 0.0;   // Theta_Xi = sup_j theta_j
  double lambda_min = 0.0;  // Lambda_S = inf_j lambda_{1,j}
  double c = 0.0;           // sup_j |S_j|^2 / |Psi_j(chi_j)|^2
  double C = 0.0;           // sup_j ||psi_j||^2
  std::vector<double> theta;
  std::vector<double> lambda1;
};

PoincareConstants poincare_constants(const FunctionalSet& fs);

// ---------------------------------------------------------------------------
// Inequality verification

/// One inequality lhs <= rhs evaluated on a concrete signal. `margin` is
/// (rhs - lhs) / max(lhs, rhs), zero when both sides vanish.
struct InequalityCheck {
  std::string name;
  std::optional<double> epsilon;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = true;
};

inline constexpr double kMarginTolerance = 1e-10;

InequalityCheck make_check(std::string name, double lhs, double rhs, std::optional<double> eps = std::nullopt);

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  std::size_t cover_multiplicity = 1;

  bool all_hold() const;
  double worst_margin() const;
  void append(const InequalityReport& other);
};

inline const std::vector<double> kDefaultEpsilons{0.1, 0.5, 1.0, 2.0, 10.0};

/// Poincare inequalities for a single connected graph and one functional:
/// the kernel bound, its centered form, the mean-value form, and the
/// epsilon-form for every epsilon given.
class SingleSetPoincare {
 public:
  SingleSetPoincare(const WeightedGraph& g, Signal psi);
  SingleSetPoincare(const WeightedGraph& g, Signal psi, const SpectralDecomposition& d);

  InequalityReport verify(const Signal& f, const std::vector<double>& epsilons = {0.1, 1.0, 10.0}) const;

  double theta() const noexcept { return theta_; }
  double lambda1() const noexcept { return lambda1_; }

 private:
  void init(const SpectralDecomposition& d);

  WeightedGraph graph_;
  Signal psi_;
  cplx total_;
  double theta_ = 0.0;
  double lambda1_ = 0.0;
};

InequalityReport verify_single_poincare(const WeightedGraph& g, const Signal& psi, const Signal& f,
                                        const std::vector<double>& epsilons = {0.1, 1.0, 10.0});

/// Cover-level Poincare inequalities: local and global epsilon-forms, the
/// joint-kernel ("many zeros") forms on the projection of f onto the joint
/// kernel, and their restrictions to a sub-family J0.
class CoverPoincare {
 public:
  /// Default J0: the first ceil(|J|/2) subsets.
  explicit CoverPoincare(const FunctionalSet& fs, std::optional<std::vector<std::size_t>> j0 = std::nullopt);

  InequalityReport verify(const Signal& f, const std::vector<double>& epsilons = kDefaultEpsilons) const;

  const PoincareConstants& constants() const noexcept { return constants_; }
  /// Orthogonal projection onto the joint kernel of all functionals.
  Signal project_joint_kernel(const Signal& f) const;
  /// Orthogonal projection onto the joint kernel of the J0 functionals.
  Signal project_subfamily_kernel(const Signal& f) const;
  const std::vector<std::size_t>& j0() const noexcept { return j0_; }

 private:
  FunctionalSet fs_;
  PoincareConstants constants_;
  std::vector<double> sample_factor_;  // |S_j|^2 / |Psi_j(chi_j)|^2
  Eigen::MatrixXcd span_basis_;        // orthonormal basis of span{psi_j}
  Eigen::MatrixXcd span_basis_j0_;
  std::vector<std::size_t> j0_;
  VertexSet g0_vertices_;
  WeightedGraph g0_;
};

InequalityReport verify_cover_poincare(const FunctionalSet& fs, const Signal& f, double epsilon,
                                       std::optional<std::vector<std::size_t>> j0 = std::nullopt);

/// Modified Gram-Schmidt with one reorthogonalization pass; columns whose
/// residual falls below `drop_tol` times their original norm are dropped.
Eigen::MatrixXcd gram_schmidt(const Eigen::MatrixXcd& columns, double drop_tol = 1e-10);

}  // namespace gpw
