#pragma once

#include <Eigen/Dense>
#include <optional>

#include "gpw/graph.hpp"

namespace gpw {

/// Eigenvalues within this distance of zero are the kernel of L.
inline constexpr double kZeroSnap = 1e-9;
/// Adjacent eigenvalues closer than this are treated as one eigenvalue.
inline constexpr double kTieSnap = 1e-9;

/// Full eigendecomposition of a graph Laplacian.
///
/// Eigenvalues ascend; column k of `eigenvectors` pairs with eigenvalue k.
/// Eigenvalues within kZeroSnap of zero are stored as exactly 0 and clusters
/// within kTieSnap share one value, so band cutoffs never split an
/// eigenspace. Each eigenvector's first non-negligible entry is positive.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  double lambda_max() const { return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0; }
  /// First eigenvalue above the zero snap; nullopt when L = 0.
  std::optional<double> first_nonzero() const;
  /// Number of eigenvalues <= omega.
  std::size_t band_dimension(double omega) const;

  /// c_k(f) = <f, phi_k>
  Eigen::VectorXcd coefficients(const Signal& f) const;
  Signal synthesize(const Eigen::VectorXcd& coeffs) const;
};

/// Throws gpw::Error(solver) when the eigensolver does not converge.
SpectralDecomposition decompose(const WeightedGraph& g);

/// The band-limited subspace PW_omega(L) = span{phi_k : lambda_k <= omega}.
struct PaleyWienerSpace {
  double bandwidth = 0.0;
  Eigen::MatrixXd basis;  // N x m, orthonormal columns

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

PaleyWienerSpace paley_wiener(const SpectralDecomposition& d, double omega);

/// Orthogonal projection onto PW_omega(L).
Signal pw_project(const SpectralDecomposition& d, const Signal& f, double omega);

/// L^s f through the eigenbasis. s = 0 is the identity (0^0 = 1). Negative s
/// requires f to have no kernel component.
Signal apply_power(const SpectralDecomposition& d, const Signal& f, double s);

/// ||L^s f|| <= omega^s ||f|| within 1e-9 relative tolerance.
bool bernstein_holds(const SpectralDecomposition& d, const Signal& f, double omega, double s);

/// ||L^{1/2} f||^2 computed spectrally.
double half_power_energy(const SpectralDecomposition& d, const Signal& f);

}  // namespace gpw
