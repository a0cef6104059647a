#pragma once

#include <optional>
#include <vector>

#include "gpw/cover.hpp"
#include "gpw/spectral.hpp"

namespace gpw {

/// Frames with A at or below this are treated as degenerate.
inline constexpr double kFrameFloor = 1e-12;

/// Certified bounds from the cover constants, for one epsilon.
struct FrameCertificate {
  double epsilon = 0.0;
  double gamma = 0.0;          // (1+eps) Theta / Lambda * omega
  double lower_bound = 0.0;    // (1-gamma) eps / ((1+eps) c), meaningful when hypothesis holds
  double upper_bound = 0.0;    // C
  double omega_limit = 0.0;    // Lambda / ((1+eps) Theta)
  bool hypothesis = false;     // 0 < omega < omega_limit
  bool lower_consistent = true;  // lower_bound <= A (+1e-9) when hypothesis holds
  bool upper_consistent = true;  // B <= C (+1e-9)
  double best_epsilon = 0.0;     // grid maximizer of the certified lower bound
  double best_lower_bound = 0.0;
  PoincareConstants constants;
  std::size_t cover_multiplicity = 1;
};

/// Frame {xi_j = P_omega psi_j} of PW_omega(L), kept in the coordinates of
/// the PW_omega eigenbasis.
struct FrameSystem {
  double bandwidth = 0.0;
  Eigen::MatrixXd basis;            // N x m, orthonormal columns
  Eigen::MatrixXcd coeffs;          // m x J, column j = basis^T psi_j
  Eigen::MatrixXcd frame_operator;  // m x m, sum_j x_j x_j^*
  double A = 0.0;                   // smallest eigenvalue of the frame operator
  double B = 0.0;                   // largest
  std::optional<FrameCertificate> certificate;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(basis.cols()); }
  std::size_t count() const noexcept { return static_cast<std::size_t>(coeffs.cols()); }
  bool is_frame() const noexcept { return A > kFrameFloor; }

  Signal frame_vector(std::size_t j) const;
  /// Lift PW_omega coordinates to a signal.
  Signal lift(const Eigen::VectorXcd& a) const;
  /// PW_omega coordinates of the projection of f.
  Eigen::VectorXcd coordinates(const Signal& f) const;
  double optimal_rho() const { return 2.0 / (A + B); }
  /// max{|1 - rho A|, |1 - rho B|}
  double eta(double rho) const;
};

/// Empirical frame from raw weight functions; no certificate.
FrameSystem frame_from_weights(const std::vector<Signal>& weights, const SpectralDecomposition& d, double omega);

/// Frame from a functional set with the certified bounds for `epsilon`.
FrameSystem build_frame(const FunctionalSet& fs, const SpectralDecomposition& d, double omega, double epsilon);

/// Phi f = sum_j <f, xi_j> xi_j, with f projected onto PW_omega first.
Signal frame_operator_apply(const FrameSystem& sys, const Signal& f);

struct IterativeOptions {
  std::optional<double> rho;  // default 2 / (A + B)
  std::size_t max_iter = 10000;
  double tol = 1e-10;
  std::optional<Signal> truth;  // records ||f - f_n|| when given
};

struct IterativeResult {
  Signal signal;
  std::size_t iterations = 0;
  bool converged = false;
  double rho = 0.0;
  double eta = 0.0;
  std::vector<double> update_norms;  // ||f_n - f_{n-1}||, n >= 1
  std::vector<double> errors;        // ||f - f_n||, n >= 0 (only with truth)
};

/// Frame algorithm f_n = f_{n-1} + rho (sum_j samples_j xi_j - Phi f_{n-1}),
/// f_0 = 0.
IterativeResult reconstruct_iterative(const FrameSystem& sys, const Eigen::VectorXcd& samples,
                                      const IterativeOptions& opts = {});

/// Canonical dual frame Omega_j = Phi^{-1} xi_j.
std::vector<Signal> dual_frame(const FrameSystem& sys);

/// sum_j samples_j Omega_j
Signal reconstruct_dual(const FrameSystem& sys, const Eigen::VectorXcd& samples);

/// True iff the analysis map is injective on PW_omega.
bool uniqueness_check(const FrameSystem& sys);

}  // namespace gpw
