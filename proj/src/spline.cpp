#include "gpw/spline.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "gpw/error.hpp"
#include "gpw/random.hpp"

namespace gpw {
namespace {

Eigen::MatrixXcd stack(const std::vector<Signal>& weights, std::size_t n) {
  Eigen::MatrixXcd w(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(weights.size()));
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (static_cast<std::size_t>(weights[j].size()) != n)
      throw Error(Errc::invalid_argument, "weight function size mismatch");
    w.col(static_cast<Eigen::Index>(j)) = weights[j];
  }
  return w;
}

void validate(const SplineProblem& p) {
  if (p.k < 1) throw Error(Errc::invalid_argument, "spline order k must be a positive integer");
  if (static_cast<std::size_t>(p.samples.size()) != p.weights.size())
    throw Error(Errc::invalid_argument, "need one sample per functional");
}

double interpolation_residual(const Eigen::MatrixXcd& w, const Signal& s, const Eigen::VectorXcd& a) {
  const Eigen::VectorXcd got = w.adjoint() * s;
  double r = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) r = std::max(r, std::abs(got(j) - a(j)) / (1.0 + std::abs(a(j))));
  return r;
}

double lambda_pow(double lam, double s) { return lam == 0.0 ? 0.0 : std::pow(lam, s); }

std::string fmt_cond(double c) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << c;
  return os.str();
}

}  // namespace

SplineProblem make_spline_problem(const FunctionalSet& fs, Eigen::VectorXcd samples, int k) {
  return SplineProblem{fs.weights, std::move(samples), k};
}

SplineSolution spline_solve(const SpectralDecomposition& d, const SplineProblem& p, const SplineOptions& opts) {
  validate(p);
  const std::size_t n = d.size();
  const Eigen::MatrixXcd w = stack(p.weights, n);
  const Eigen::MatrixXcd phi = d.eigenvectors.cast<cplx>();
  // Constraint map on eigen-coefficients: <Phi c, psi_j> = (W^* Phi c)_j
  const Eigen::MatrixXcd b = w.adjoint() * phi;

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-10 * smax) ++rank;

  const Eigen::MatrixXcd& u = svd.matrixU();
  const Eigen::MatrixXcd& v = svd.matrixV();
  Eigen::VectorXcd cp = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  if (rank > 0)
    cp = v.leftCols(rank) * (sv.head(rank).cast<cplx>().cwiseInverse().asDiagonal() *
                             (u.leftCols(rank).adjoint() * p.samples));
  const double infeasibility = (b * cp - p.samples).norm();
  if (infeasibility > 1e-9 * (1.0 + p.samples.norm()))
    throw Error(Errc::infeasible, "interpolation constraints are inconsistent (residual " + fmt_cond(infeasibility) + ")");

  Eigen::VectorXd dk(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < dk.size(); ++i) dk(i) = lambda_pow(d.eigenvalues(i), p.k);

  SplineSolution sol;
  sol.constraint_rank = static_cast<std::size_t>(rank);
  Eigen::VectorXcd c = cp;
  const Eigen::Index free_dim = static_cast<Eigen::Index>(n) - rank;
  bool solved = free_dim == 0;

  if (!solved && rank > 0 && d.eigenvalues(rank) > 0.0) {
    // Graded path. Rows: an orthonormal recombination of independent
    // constraints. Columns split at `rank` into low (L) and high (H)
    // frequencies; when B_L is invertible, c_L = B_L^{-1}(a - B_H c_H) and
    // with c_H = D_H^{-1/2} y the objective becomes ||g - G y||^2 + ||y||^2,
    // G = D_L^{1/2} B_L^{-1} B_H D_H^{-1/2}. Entries of G carry the factors
    // (lambda_L / lambda_H)^{k/2} <= 1, so I + G G^* stays well conditioned
    // for every k.
    const Eigen::MatrixXcd br = u.leftCols(rank).adjoint() * b;
    const Eigen::VectorXcd ar = u.leftCols(rank).adjoint() * p.samples;
    const Eigen::MatrixXcd bl = br.leftCols(rank);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd_l(bl);
    const Eigen::VectorXd& sl = svd_l.singularValues();
    const double cond_l = sl(rank - 1) > 0.0 ? sl(0) / sl(rank - 1) : std::numeric_limits<double>::infinity();
    if (cond_l <= 1e10) {
      const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(bl);
      const Eigen::MatrixXcd e = lu.solve(br.rightCols(free_dim));
      const Eigen::VectorXcd cl0 = lu.solve(ar);
      const double half = 0.5 * p.k;
      Eigen::VectorXd sqrt_dl(rank);
      for (Eigen::Index i = 0; i < rank; ++i) sqrt_dl(i) = lambda_pow(d.eigenvalues(i), half);
      Eigen::VectorXd inv_sqrt_dh(free_dim);
      for (Eigen::Index i = 0; i < free_dim; ++i) inv_sqrt_dh(i) = std::pow(d.eigenvalues(rank + i), -half);
      Eigen::MatrixXcd gm(rank, free_dim);
      for (Eigen::Index i = 0; i < rank; ++i)
        for (Eigen::Index jcol = 0; jcol < free_dim; ++jcol) {
          const double li = d.eigenvalues(i), lj = d.eigenvalues(rank + jcol);
          const double scale = li == 0.0 ? 0.0 : std::exp(half * (std::log(li) - std::log(lj)));
          gm(i, jcol) = scale * e(i, jcol);
        }
      const Eigen::VectorXcd gv = sqrt_dl.cast<cplx>().asDiagonal() * cl0;
      const Eigen::MatrixXcd sys = Eigen::MatrixXcd::Identity(rank, rank) + gm * gm.adjoint();
      const Eigen::LLT<Eigen::MatrixXcd> llt(sys);
      if (llt.info() == Eigen::Success) {
        const Eigen::VectorXcd y = gm.adjoint() * llt.solve(gv);
        const Eigen::VectorXcd ch = inv_sqrt_dh.cast<cplx>().asDiagonal() * y;
        c.head(rank) = cl0 - e * ch;
        c.tail(free_dim) = ch;
        sol.condition = cond_l * (1.0 + gm.squaredNorm());
        solved = true;
      }
    }
  }

  if (!solved) {
    const Eigen::MatrixXcd nb = v.rightCols(free_dim);
    const Eigen::MatrixXcd h = nb.adjoint() * dk.cast<cplx>().asDiagonal() * nb;
    const Eigen::VectorXcd rhs = -(nb.adjoint() * (dk.cast<cplx>().asDiagonal() * cp));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw Error(Errc::solver, "reduced spline system eigensolve failed");
    const Eigen::VectorXd& mu = es.eigenvalues();
    const double mu_max = std::max(mu(mu.size() - 1), 0.0);
    // Directions in ker L^k intersected with Z_0 carry eigenvalue ~ 0.
    const double zero_cut = mu_max > 0.0 ? 1e-14 * mu_max : 0.0;
    double mu_min = mu_max;
    Eigen::VectorXcd z = Eigen::VectorXcd::Zero(free_dim);
    const Eigen::VectorXcd proj = es.eigenvectors().adjoint() * rhs;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if (mu(i) <= zero_cut) {
        ++sol.degenerate_dimension;
        continue;
      }
      mu_min = std::min(mu_min, mu(i));
      z += es.eigenvectors().col(i) * (proj(i) / mu(i));
    }
    sol.condition = mu_min > 0.0 ? mu_max / mu_min : std::numeric_limits<double>::infinity();
    if (sol.degenerate_dimension > 0 && opts.on_degenerate == DegeneratePolicy::reject)
      throw Error(Errc::degenerate, std::to_string(sol.degenerate_dimension) +
                                        "-dimensional intersection of ker L^k with the constraint kernel; "
                                        "minimizer not unique (condition estimate " +
                                        fmt_cond(sol.condition) + ")");
    if (sol.degenerate_dimension == 0 && sol.condition > opts.max_condition)
      throw Error(Errc::solver, "spline system ill-conditioned (condition estimate " + fmt_cond(sol.condition) + ")");
    c += nb * z;
  }
  if (sol.condition > opts.max_condition && sol.degenerate_dimension == 0)
    throw Error(Errc::solver, "spline system ill-conditioned (condition estimate " + fmt_cond(sol.condition) + ")");

  sol.signal = d.synthesize(c);
  double obj = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) obj += dk(i) * std::norm(c(i));
  sol.objective = std::sqrt(obj);
  sol.interpolation_residual = interpolation_residual(w, sol.signal, p.samples);
  return sol;
}

Eigen::MatrixXcd constraint_kernel_basis(const std::vector<Signal>& weights, std::size_t n) {
  const Eigen::MatrixXcd w = stack(weights, n);
  const Eigen::MatrixXcd span = gram_schmidt(w);
  Eigen::MatrixXcd all(static_cast<Eigen::Index>(n), span.cols() + static_cast<Eigen::Index>(n));
  all << span, Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXcd full = gram_schmidt(all);
  return full.rightCols(full.cols() - span.cols());
}

SplineSolution spline_solve_projection(const WeightedGraph& g, const SplineProblem& p,
                                       std::optional<std::uint64_t> seed) {
  validate(p);
  const std::size_t n = g.size();
  const auto ni = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXcd w = stack(p.weights, n);

  // L^k column by column through the Laplacian kernel.
  Eigen::MatrixXcd lk = Eigen::MatrixXcd::Identity(ni, ni);
  for (int step = 0; step < p.k; ++step)
    for (Eigen::Index col = 0; col < ni; ++col) lk.col(col) = laplacian_apply(g, Signal(lk.col(col)));

  // A feasible start inside span{psi_j}.
  const Eigen::MatrixXcd span = gram_schmidt(w);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(w.adjoint() * span);
  Signal f = span * cod.solve(p.samples);
  if ((w.adjoint() * f - p.samples).norm() > 1e-9 * (1.0 + p.samples.norm()))
    throw Error(Errc::infeasible, "interpolation constraints are inconsistent");

  const Eigen::MatrixXcd z = constraint_kernel_basis(p.weights, n);
  if (seed && z.cols() > 0) {
    Rng rng(*seed);
    f += z * random_signal(static_cast<std::size_t>(z.cols()), rng);
  }

  SplineSolution sol;
  sol.constraint_rank = static_cast<std::size_t>(span.cols());
  Signal s = f;
  if (z.cols() > 0) {
    const Eigen::MatrixXcd m = w * w.adjoint() + lk;
    const Eigen::MatrixXcd gram = z.adjoint() * m * z;
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) throw Error(Errc::solver, "projection Gram matrix factorization failed");
    // scale from the full operator so a 1x1 near-zero Gram is still caught
    const double dmax = std::max(ldlt.vectorD().cwiseAbs().maxCoeff(), m.cwiseAbs().maxCoeff());
    const double dmin = ldlt.vectorD().cwiseAbs().minCoeff();
    sol.condition = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    if (!(dmin > 1e-14 * dmax))
      throw Error(Errc::degenerate, "<.,.>_k is not an inner product on Z_0 (condition estimate " +
                                        fmt_cond(sol.condition) + ")");
    s = f - z * ldlt.solve(z.adjoint() * (m * f));
  }
  sol.signal = s;
  sol.objective = std::sqrt(std::max(0.0, s.dot(lk * s).real()));
  sol.interpolation_residual = interpolation_residual(w, s, p.samples);
  return sol;
}

bool power_orthogonality_check(const SpectralDecomposition& d, const std::vector<Signal>& weights, const Signal& s,
                               double power, std::size_t trials, std::uint64_t seed) {
  const Eigen::MatrixXcd z0 = constraint_kernel_basis(weights, d.size());
  if (z0.cols() == 0) return true;
  Rng rng(seed);
  const Signal ls = apply_power(d, s, power);
  for (std::size_t t = 0; t < trials; ++t) {
    const Signal z = z0 * random_signal(static_cast<std::size_t>(z0.cols()), rng);
    const Signal lz = apply_power(d, z, power);
    const double scale = ls.norm() * lz.norm();
    if (scale == 0.0) continue;
    if (std::abs(lz.dot(ls)) > 1e-8 * scale) return false;
  }
  return true;
}

bool spline_characterization_check(const SpectralDecomposition& d, const SplineProblem& p, const Signal& s,
                                   std::size_t trials, std::uint64_t seed) {
  validate(p);
  const Eigen::MatrixXcd w = stack(p.weights, d.size());
  if (interpolation_residual(w, s, p.samples) > p.tol) return false;
  return power_orthogonality_check(d, p.weights, s, 0.5 * p.k, trials, seed);
}

SplineReconstruction spline_reconstruct(const FunctionalSet& fs, const SpectralDecomposition& d, const Signal& f,
                                        double omega, const std::vector<int>& k_list, const SplineOptions& opts) {
  require_same_size(fs.cover.graph, f);
  if (!(omega >= 0.0)) throw Error(Errc::invalid_argument, "bandwidth must be nonnegative");
  const double fnorm = f.norm();
  if ((f - pw_project(d, f, omega)).norm() > 1e-9 * std::max(fnorm, 1e-300))
    throw Error(Errc::invalid_argument, "signal is not in PW_omega");

  const PoincareConstants k = poincare_constants(fs);
  SplineReconstruction r;
  r.omega = omega;
  r.omega_limit = k.lambda_min / k.theta_max;
  r.gamma = k.theta_max / k.lambda_min * omega;
  r.hypothesis = omega > 0.0 && omega < r.omega_limit;
  if (!r.hypothesis)
    r.warning = "omega outside (0, Lambda/Theta) = (0, " + std::to_string(r.omega_limit) + "); no error bound claimed";

  const Eigen::VectorXcd samples = analyze(fs, f);
  for (int order : k_list) {
    const SplineSolution sol = spline_solve(d, make_spline_problem(fs, samples, order), opts);
    SplineStep step;
    step.k = order;
    step.error = (f - sol.signal).norm();
    step.objective = sol.objective;
    step.interpolation_residual = sol.interpolation_residual;
    if (r.hypothesis) step.bound = 2.0 * std::pow(r.gamma, order) * fnorm;
    step.signal = sol.signal;
    r.steps.push_back(std::move(step));
  }
  return r;
}

bool doubling_lemma_check(const SpectralDecomposition& d, const Signal& phi, double a, const std::vector<int>& k_list) {
  if (!(a > 0.0)) throw Error(Errc::invalid_argument, "lemma constant must be positive");
  const double norm = phi.norm();
  const double base = a * apply_power(d, phi, 1.0).norm();
  if (norm > base * (1.0 + 1e-9))
    throw Error(Errc::invalid_argument, "base case ||phi|| <= a ||L phi|| fails; lemma inapplicable");
  for (int k : k_list) {
    if (k < 1 || (k & (k - 1)) != 0) throw Error(Errc::invalid_argument, "k must be a power of two");
    const double rhs = std::pow(a, k) * apply_power(d, phi, k).norm();
    if (norm > rhs * (1.0 + 1e-9)) return false;
  }
  return true;
}

}  // namespace gpw
