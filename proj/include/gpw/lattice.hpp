#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpw/cover.hpp"
#include "gpw/spectral.hpp"

namespace gpw {

/// Unit-weight path 0 - 1 - ... - (N-1). N >= 2.
WeightedGraph make_path(std::size_t n);
/// Unit-weight cycle on N >= 3 vertices.
WeightedGraph make_cycle(std::size_t n);

/// Sorted 2 - 2cos(k pi / N), k = 0..N-1: the spectrum of the path P_N.
std::vector<double> path_spectrum(std::size_t n);
/// Sorted 2 - 2cos(k pi / (N-1)), k = 0..N-1. Kept only to report how far
/// this commonly quoted form is from the actual path spectrum.
std::vector<double> path_spectrum_shifted_formula(std::size_t n);
/// Sorted 2 - 2cos(2 pi k / N), k = 0..N-1.
std::vector<double> cycle_spectrum(std::size_t n);

enum class LatticeKind { path, cycle };
const char* to_string(LatticeKind k);

/// A stated value next to the value computed from the Laplacian.
struct Discrepancy {
  std::string quantity;
  std::vector<double> stated;
  std::vector<double> computed;
  double max_abs_difference = 0.0;
  bool agrees = false;  // max_abs_difference <= 1e-9
  std::string note;
};

/// Path or cycle on N vertices (3 | N) covered by consecutive triples
/// {3j, 3j+1, 3j+2} with psi_j = chi_j / sqrt(3). The edges joining two
/// triples belong to no subset.
struct LatticeFixture {
  std::size_t n = 0;
  LatticeKind kind = LatticeKind::cycle;
  SpectralDecomposition spectrum;
  FunctionalSet functionals;
  PoincareConstants constants;
  std::vector<double> induced_spectrum;  // computed spectrum of the triple S_0

  // Values asserted for the integer lattice, reported against the above.
  std::vector<double> stated_induced_spectrum{0.0, 2.0, 4.0};
  double stated_lambda = 2.0;
  double stated_omega_threshold = 2.0;
  double stated_c = 1.0;

  const WeightedGraph& graph() const noexcept { return functionals.cover.graph; }
  /// Lambda_S / Theta: supremum of admissible omega as epsilon -> 0.
  double omega_threshold() const noexcept { return constants.lambda_min / constants.theta_max; }
  /// Lambda_S / ((1 + eps) Theta)
  double admissible_upper(double epsilon) const noexcept {
    return constants.lambda_min / ((1.0 + epsilon) * constants.theta_max);
  }
  /// (1 + eps) Theta / Lambda_S * omega
  double gamma(double omega, double epsilon) const noexcept {
    return (1.0 + epsilon) * constants.theta_max / constants.lambda_min * omega;
  }
};

LatticeFixture triple_cover_fixture(std::size_t n, LatticeKind kind);

std::vector<Discrepancy> lattice_discrepancies(const LatticeFixture& fix);

enum class ReconMethod { frame, spline };
const char* to_string(ReconMethod m);

struct LatticeOptions {
  double omega = 0.5;
  double epsilon = 1.0;
  ReconMethod method = ReconMethod::frame;
  std::vector<int> k_list{1, 2, 4, 8, 16, 32, 64};
  std::optional<double> rho;  // frame; default 2 / (A + B)
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  /// Reject omega outside (0, Lambda/((1+eps) Theta)). When false the
  /// experiment runs anyway and reports whether samples still determine f.
  bool strict_admissibility = true;
};

/// Per-k spline errors, maximized over trials, relative to ||f||.
struct SplineErrorRow {
  int k = 0;
  double max_relative_error = 0.0;
  std::optional<double> relative_bound;  // 2 gamma^k
};

struct EigenvectorCheck {
  std::size_t index = 0;
  double eigenvalue = 0.0;
  double error = 0.0;
};

struct LatticeReport {
  std::size_t n = 0;
  LatticeKind kind = LatticeKind::cycle;
  ReconMethod method = ReconMethod::frame;
  double omega = 0.0;
  double epsilon = 0.0;
  double admissible_upper = 0.0;  // Lambda / ((1+eps) Theta)
  double omega_threshold = 0.0;   // Lambda / Theta
  double gamma = 0.0;
  bool admissible = false;
  bool reconstructible = false;  // analysis map injective on PW_omega
  std::size_t pw_dimension = 0;
  std::size_t sample_count = 0;

  std::vector<double> errors;  // ||f - f_rec|| per trial
  std::vector<double> norms;   // ||f|| per trial
  std::optional<double> bound;  // relative: eta^n (frame) or 2 gamma^k_max (spline)
  bool bounds_respected = true;

  // frame
  double A = 0.0, B = 0.0, rho = 0.0, eta = 0.0;
  std::size_t max_iterations = 0;
  // spline
  std::vector<SplineErrorRow> spline_rows;

  std::vector<EigenvectorCheck> eigenvectors;  // eigenvalue below omega_threshold
  std::vector<Discrepancy> discrepancies;
  bool within_contract = false;
};

/// Draws `trials` random f in PW_omega, samples them with the fixture's
/// functionals and reconstructs with the chosen method. Also reconstructs
/// every eigenvector whose eigenvalue lies below Lambda/Theta.
/// Throws AdmissibilityError for omega outside the admissible range when
/// strict_admissibility is set.
LatticeReport run_lattice_experiment(const LatticeFixture& fix, const LatticeOptions& opts);

}  // namespace gpw
