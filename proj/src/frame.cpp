#include "gpw/frame.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gpw/error.hpp"

namespace gpw {

Signal FrameSystem::frame_vector(std::size_t j) const { return lift(coeffs.col(static_cast<Eigen::Index>(j))); }

Signal FrameSystem::lift(const Eigen::VectorXcd& a) const { return basis.cast<cplx>() * a; }

Eigen::VectorXcd FrameSystem::coordinates(const Signal& f) const {
  if (f.size() != basis.rows()) throw Error(Errc::invalid_argument, "signal size does not match the frame");
  return basis.transpose().cast<cplx>() * f;
}

double FrameSystem::eta(double rho) const { return std::max(std::abs(1.0 - rho * A), std::abs(1.0 - rho * B)); }

FrameSystem frame_from_weights(const std::vector<Signal>& weights, const SpectralDecomposition& d, double omega) {
  if (!(omega >= 0.0)) throw Error(Errc::invalid_argument, "bandwidth must be nonnegative");
  FrameSystem sys;
  sys.bandwidth = omega;
  sys.basis = paley_wiener(d, omega).basis;
  const Eigen::Index m = sys.basis.cols();
  if (m == 0) throw Error(Errc::invalid_argument, "PW_omega is trivial");
  sys.coeffs.resize(m, static_cast<Eigen::Index>(weights.size()));
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j].size() != sys.basis.rows()) throw Error(Errc::invalid_argument, "weight function size mismatch");
    sys.coeffs.col(static_cast<Eigen::Index>(j)) = sys.basis.transpose().cast<cplx>() * weights[j];
  }
  sys.frame_operator = sys.coeffs * sys.coeffs.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.frame_operator, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(Errc::solver, "frame operator eigensolve failed");
  sys.A = std::max(0.0, es.eigenvalues()(0));
  sys.B = es.eigenvalues()(m - 1);
  return sys;
}

namespace {

double certified_lower(double gamma, double eps, double c) { return (1.0 - gamma) * eps / ((1.0 + eps) * c); }

}  // namespace

FrameSystem build_frame(const FunctionalSet& fs, const SpectralDecomposition& d, double omega, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(Errc::invalid_argument, "epsilon must be positive");
  FrameSystem sys = frame_from_weights(fs.weights, d, omega);

  FrameCertificate cert;
  cert.constants = poincare_constants(fs);
  cert.cover_multiplicity = fs.cover.multiplicity;
  const auto& k = cert.constants;
  const double ratio = k.theta_max / k.lambda_min;
  cert.epsilon = epsilon;
  cert.gamma = (1.0 + epsilon) * ratio * omega;
  cert.omega_limit = k.lambda_min / ((1.0 + epsilon) * k.theta_max);
  cert.hypothesis = omega > 0.0 && omega < cert.omega_limit;
  cert.lower_bound = certified_lower(cert.gamma, epsilon, k.c);
  cert.upper_bound = k.C;
  if (cert.hypothesis) {
    cert.lower_consistent = cert.lower_bound <= sys.A + 1e-9;
    cert.upper_consistent = sys.B <= cert.upper_bound * static_cast<double>(cert.cover_multiplicity) + 1e-9;
  }

  // Log grid 1e-3 .. 1e3, 601 points.
  for (int i = 0; i <= 600; ++i) {
    const double eps = std::pow(10.0, -3.0 + 0.01 * i);
    const double gamma = (1.0 + eps) * ratio * omega;
    if (!(omega > 0.0) || gamma >= 1.0) continue;
    const double lb = certified_lower(gamma, eps, k.c);
    if (lb > cert.best_lower_bound) {
      cert.best_lower_bound = lb;
      cert.best_epsilon = eps;
    }
  }
  sys.certificate = cert;
  return sys;
}

Signal frame_operator_apply(const FrameSystem& sys, const Signal& f) {
  return sys.lift(sys.frame_operator * sys.coordinates(f));
}

IterativeResult reconstruct_iterative(const FrameSystem& sys, const Eigen::VectorXcd& samples,
                                      const IterativeOptions& opts) {
  if (!sys.is_frame()) throw Error(Errc::not_a_frame, "frame lower bound A <= 1e-12; reconstruction disabled");
  if (static_cast<std::size_t>(samples.size()) != sys.count())
    throw Error(Errc::invalid_argument, "expected " + std::to_string(sys.count()) + " samples");
  const double rho = opts.rho.value_or(sys.optimal_rho());
  if (!(rho > 0.0 && rho < 2.0 / sys.B))
    throw Error(Errc::invalid_argument, "relaxation parameter must lie in (0, 2/B) = (0, " +
                                            std::to_string(2.0 / sys.B) + ")");

  IterativeResult r;
  r.rho = rho;
  r.eta = sys.eta(rho);
  // <f, xi_j> = samples_j for f in PW_omega, so Phi f is known from samples.
  const Eigen::VectorXcd phi_f = sys.coeffs * samples;
  Eigen::VectorXcd truth_coords;
  if (opts.truth) {
    truth_coords = sys.coordinates(*opts.truth);
    r.errors.push_back(opts.truth->norm());
  }
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sys.dimension()));
  for (std::size_t n = 1; n <= opts.max_iter; ++n) {
    const Eigen::VectorXcd update = rho * (phi_f - sys.frame_operator * a);
    a += update;
    r.iterations = n;
    const double un = update.norm();
    r.update_norms.push_back(un);
    if (opts.truth) r.errors.push_back((sys.lift(a) - *opts.truth).norm());
    if (un < opts.tol) {
      r.converged = true;
      break;
    }
  }
  r.signal = sys.lift(a);
  return r;
}

namespace {

Eigen::LDLT<Eigen::MatrixXcd> factor(const FrameSystem& sys) {
  if (!sys.is_frame()) throw Error(Errc::not_a_frame, "frame operator is singular on PW_omega");
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(sys.frame_operator);
  if (ldlt.info() != Eigen::Success) throw Error(Errc::solver, "frame operator factorization failed");
  return ldlt;
}

}  // namespace

std::vector<Signal> dual_frame(const FrameSystem& sys) {
  const auto ldlt = factor(sys);
  const Eigen::MatrixXcd dual = ldlt.solve(sys.coeffs);
  std::vector<Signal> out;
  for (Eigen::Index j = 0; j < dual.cols(); ++j) out.push_back(sys.lift(dual.col(j)));
  return out;
}

Signal reconstruct_dual(const FrameSystem& sys, const Eigen::VectorXcd& samples) {
  if (static_cast<std::size_t>(samples.size()) != sys.count())
    throw Error(Errc::invalid_argument, "expected " + std::to_string(sys.count()) + " samples");
  const auto ldlt = factor(sys);
  return sys.lift(ldlt.solve(sys.coeffs * samples));
}

bool uniqueness_check(const FrameSystem& sys) { return sys.is_frame(); }

}  // namespace gpw
