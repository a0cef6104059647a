#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpw/cover.hpp"
#include "gpw/spectral.hpp"

namespace gpw {

/// Find u minimizing ||L^{k/2} u|| subject to <u, psi_j> = samples_j.
struct SplineProblem {
  std::vector<Signal> weights;
  Eigen::VectorXcd samples;
  int k = 1;
  double tol = 1e-9;  // interpolation tolerance, relative to 1 + |samples_j|
};

SplineProblem make_spline_problem(const FunctionalSet& fs, Eigen::VectorXcd samples, int k);

enum class DegeneratePolicy {
  reject,    // throw when ker L^k meets the constraint kernel
  restrict,  // minimum-norm minimizer, degeneracy reported
};

struct SplineOptions {
  DegeneratePolicy on_degenerate = DegeneratePolicy::reject;
  double max_condition = 1e12;
};

struct SplineSolution {
  Signal signal;
  double objective = 0.0;              // ||L^{k/2} s||
  double interpolation_residual = 0.0;  // max_j |<s,psi_j> - a_j| / (1 + |a_j|)
  double condition = 1.0;              // of the reduced system
  std::size_t constraint_rank = 0;
  std::size_t degenerate_dimension = 0;
};

/// Spectral null-space solve: parametrize the feasible set as a particular
/// solution plus the kernel of the constraint map, then minimize the
/// quadratic form diag(lambda^k) on that kernel.
SplineSolution spline_solve(const SpectralDecomposition& d, const SplineProblem& p, const SplineOptions& opts = {});

/// Projection construction in vertex coordinates: start from a feasible u
/// (plus a seeded random element of Z_0 when `seed` is given) and subtract
/// its projection onto Z_0 in the inner product
///   <f,g>_k = sum_j <f,psi_j> conj(<g,psi_j>) + <L^{k/2} f, L^{k/2} g>.
/// L^k is formed by repeated Laplacian application; no eigendecomposition.
SplineSolution spline_solve_projection(const WeightedGraph& g, const SplineProblem& p,
                                       std::optional<std::uint64_t> seed = std::nullopt);

/// Orthonormal basis of Z_0 = joint kernel of the weights.
Eigen::MatrixXcd constraint_kernel_basis(const std::vector<Signal>& weights, std::size_t n);

/// Checks |<L^power s, L^power z>| <= 1e-8 ||L^power s|| ||L^power z|| for
/// `trials` random z in Z_0.
bool power_orthogonality_check(const SpectralDecomposition& d, const std::vector<Signal>& weights, const Signal& s,
                               double power, std::size_t trials, std::uint64_t seed);

/// Optimality of an interpolating s for order k: L^{k/2} s orthogonal to
/// L^{k/2} Z_0. False when s does not interpolate the samples.
bool spline_characterization_check(const SpectralDecomposition& d, const SplineProblem& p, const Signal& s,
                                   std::size_t trials, std::uint64_t seed = 1);

struct SplineStep {
  int k = 0;
  Signal signal;
  double error = 0.0;
  std::optional<double> bound;  // 2 gamma^k ||f|| when the hypothesis holds
  double objective = 0.0;
  double interpolation_residual = 0.0;
};

struct SplineReconstruction {
  double omega = 0.0;
  double gamma = 0.0;        // Theta / Lambda * omega
  double omega_limit = 0.0;  // Lambda / Theta
  bool hypothesis = false;
  std::string warning;
  std::vector<SplineStep> steps;
};

/// Samples f in PW_omega with the functional set and solves the spline
/// problem for each k.
SplineReconstruction spline_reconstruct(const FunctionalSet& fs, const SpectralDecomposition& d, const Signal& f,
                                        double omega, const std::vector<int>& k_list,
                                        const SplineOptions& opts = {});

/// ||phi|| <= a^k ||L^k phi|| for each k (powers of two) given the base case
/// ||phi|| <= a ||L phi||. Throws when the base case fails.
bool doubling_lemma_check(const SpectralDecomposition& d, const Signal& phi, double a, const std::vector<int>& k_list);

}  // namespace gpw
