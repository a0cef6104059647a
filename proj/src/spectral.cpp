#include "gpw/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gpw/error.hpp"

namespace gpw {

std::optional<double> SpectralDecomposition::first_nonzero() const {
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    if (eigenvalues(k) > kZeroSnap) return eigenvalues(k);
  return std::nullopt;
}

std::size_t SpectralDecomposition::band_dimension(double omega) const {
  std::size_t m = 0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
    if (eigenvalues(k) <= omega) ++m;
  return m;
}

Eigen::VectorXcd SpectralDecomposition::coefficients(const Signal& f) const {
  if (f.size() != eigenvectors.rows())
    throw Error(Errc::invalid_argument, "signal size does not match the decomposition");
  // Eigenvectors are real, so <f, phi_k> = phi_k^T f.
  return eigenvectors.transpose().cast<cplx>() * f;
}

Signal SpectralDecomposition::synthesize(const Eigen::VectorXcd& coeffs) const {
  return eigenvectors.cast<cplx>() * coeffs;
}

SpectralDecomposition decompose(const WeightedGraph& g) {
  if (g.size() == 0) throw Error(Errc::invalid_argument, "cannot decompose an empty graph");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.dense_laplacian());
  if (solver.info() != Eigen::Success)
    throw Error(Errc::solver, "eigensolver did not converge on a graph with " + std::to_string(g.size()) +
                                  " vertices and " + std::to_string(g.edge_count()) + " edges");

  SpectralDecomposition d;
  d.eigenvalues = solver.eigenvalues();
  d.eigenvectors = solver.eigenvectors();
  const Eigen::Index n = d.eigenvalues.size();

  for (Eigen::Index k = 0; k < n; ++k)
    if (std::abs(d.eigenvalues(k)) <= kZeroSnap) d.eigenvalues(k) = 0.0;

  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index end = start + 1;
    while (end < n && d.eigenvalues(end) - d.eigenvalues(start) <= kTieSnap) ++end;
    if (end - start > 1) {
      const double shared = d.eigenvalues(start) == 0.0 ? 0.0 : d.eigenvalues.segment(start, end - start).mean();
      d.eigenvalues.segment(start, end - start).setConstant(shared);
    }
    start = end;
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = d.eigenvectors.col(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-12) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
  }
  return d;
}

PaleyWienerSpace paley_wiener(const SpectralDecomposition& d, double omega) {
  if (!(omega >= 0.0)) throw Error(Errc::invalid_argument, "bandwidth must be nonnegative");
  PaleyWienerSpace pw;
  pw.bandwidth = omega;
  // Eigenvalues ascend, so the band is a leading block of columns.
  pw.basis = d.eigenvectors.leftCols(static_cast<Eigen::Index>(d.band_dimension(omega)));
  return pw;
}

Signal pw_project(const SpectralDecomposition& d, const Signal& f, double omega) {
  const PaleyWienerSpace pw = paley_wiener(d, omega);
  const Eigen::MatrixXcd basis = pw.basis.cast<cplx>();
  return basis * (basis.adjoint() * f);
}

Signal apply_power(const SpectralDecomposition& d, const Signal& f, double s) {
  Eigen::VectorXcd c = d.coefficients(f);
  if (s == 0.0) return f;
  const double fnorm = f.norm();
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double lam = d.eigenvalues(k);
    if (lam == 0.0) {
      if (s < 0.0 && std::abs(c(k)) > 1e-10 * std::max(fnorm, 1e-300))
        throw Error(Errc::invalid_argument, "negative power of L applied to a signal with a kernel component");
      c(k) = 0.0;
    } else {
      c(k) *= std::pow(lam, s);
    }
  }
  return d.synthesize(c);
}

bool bernstein_holds(const SpectralDecomposition& d, const Signal& f, double omega, double s) {
  if (s < 0.0) throw Error(Errc::invalid_argument, "Bernstein check needs s >= 0");
  const double fnorm = f.norm();
  const double lhs = apply_power(d, f, s).norm();
  const double rhs = std::pow(omega, s) * fnorm;
  // Absolute slack proportional to the largest attainable ||L^s f||.
  const double scale = std::max(1.0, std::pow(d.lambda_max(), s)) * fnorm;
  return lhs <= rhs + 1e-9 * std::max(rhs, scale);
}

double half_power_energy(const SpectralDecomposition& d, const Signal& f) {
  const Eigen::VectorXcd c = d.coefficients(f);
  double s = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) s += d.eigenvalues(k) * std::norm(c(k));
  return s;
}

}  // namespace gpw
