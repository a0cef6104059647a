#include <cmath>
#include <random>

#include "doctest.h"
#include "gpw/error.hpp"
#include "gpw/frame.hpp"
#include "gpw/lattice.hpp"
#include "gpw/random.hpp"
#include "oracles.hpp"

using gpw::cplx;
using gpw::Signal;
using gpw::VertexSet;

namespace {

std::vector<VertexSet> triples(std::size_t n) {
  std::vector<VertexSet> s;
  for (std::size_t j = 0; j < n / 3; ++j) s.push_back({3 * j, 3 * j + 1, 3 * j + 2});
  return s;
}

gpw::FunctionalSet cycle_triples(std::size_t n) {
  return gpw::normalized_functionals(gpw::build_cover(gpw::make_cycle(n), triples(n)));
}

// Oracle: frame operator assembled in vertex coordinates, restricted to PW
// by an explicit orthonormal basis of eigenvectors.
std::pair<double, double> oracle_bounds(const gpw::WeightedGraph& g, const std::vector<Signal>& weights, double omega) {
  const auto [vals, vecs] = oracle::jacobi_eigen(g.dense_laplacian());
  int m = 0;
  while (m < vals.size() && vals(m) <= omega + 1e-9) ++m;
  const Eigen::MatrixXcd basis = vecs.leftCols(m).cast<cplx>();
  Eigen::MatrixXcd frame = Eigen::MatrixXcd::Zero(m, m);
  for (const auto& w : weights) {
    const Eigen::VectorXcd x = basis.adjoint() * w;
    frame += x * x.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(frame);
  return {es.eigenvalues()(0), es.eigenvalues()(m - 1)};
}

}  // namespace

TEST_CASE("frame bounds match an independent frame operator") {
  for (std::size_t n : {9u, 12u, 30u}) {
    const auto fs = cycle_triples(n);
    const auto d = gpw::decompose(fs.cover.graph);
    for (double omega : {0.0, 0.2, 0.5, 0.9}) {
      const auto sys = gpw::build_frame(fs, d, omega, 0.5);
      const auto [a, b] = oracle_bounds(fs.cover.graph, fs.weights, omega);
      CHECK(sys.A == doctest::Approx(std::max(a, 0.0)).epsilon(1e-9));
      CHECK(sys.B == doctest::Approx(b).epsilon(1e-9));
    }
  }
}

TEST_CASE("single unit functional on PW_0") {
  const auto g = gpw::make_path(5);
  const auto d = gpw::decompose(g);
  const Signal phi0 = d.eigenvectors.col(0).cast<cplx>();
  const auto sys = gpw::frame_from_weights({phi0}, d, 0.0);
  CHECK(sys.dimension() == 1);
  CHECK(sys.A == doctest::Approx(1.0));
  CHECK(sys.B == doctest::Approx(1.0));
}

TEST_CASE("certificate brackets the empirical bounds on a grid") {
  for (std::size_t n : {9u, 30u, 60u}) {
    const auto fs = cycle_triples(n);
    const auto d = gpw::decompose(fs.cover.graph);
    std::size_t held = 0;
    for (double eps : {0.1, 0.5, 1.0, 2.0, 10.0})
      for (double omega : {0.01, 0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8, 0.95}) {
        const auto sys = gpw::build_frame(fs, d, omega, eps);
        const auto& c = *sys.certificate;
        CHECK(c.gamma == doctest::Approx((1 + eps) * c.constants.theta_max / c.constants.lambda_min * omega));
        if (!c.hypothesis) continue;
        ++held;
        CHECK(c.gamma < 1.0);
        CHECK(sys.A >= (1 - c.gamma) * eps / ((1 + eps) * c.constants.c) - 1e-9);
        CHECK(sys.B <= c.constants.C + 1e-9);
        CHECK(c.lower_consistent);
        CHECK(c.upper_consistent);
        CHECK(c.best_lower_bound >= c.lower_bound - 1e-12);
      }
    CHECK(held > 10);
  }
}

TEST_CASE("above the certified range the frame may still be usable") {
  const auto fs = cycle_triples(30);
  const auto d = gpw::decompose(fs.cover.graph);
  const auto sys = gpw::build_frame(fs, d, 0.95, 1.0);
  CHECK_FALSE(sys.certificate->hypothesis);
  CHECK(sys.is_frame());
  CHECK(gpw::uniqueness_check(sys));
}

TEST_CASE("frame operator identities") {
  gpw::Rng rng(3);
  const auto fs = cycle_triples(12);
  const auto d = gpw::decompose(fs.cover.graph);
  const auto sys = gpw::build_frame(fs, d, 0.5, 1.0);
  for (int t = 0; t < 20; ++t) {
    const Signal f = gpw::random_bandlimited(d, 0.5, rng);
    const Signal pf = gpw::frame_operator_apply(sys, f);
    double energy = 0.0;
    for (std::size_t j = 0; j < sys.count(); ++j) energy += std::norm(f.dot(sys.frame_vector(j)));
    CHECK(std::abs(pf.dot(f) - cplx(energy)) <= 1e-10 * std::max(1.0, energy));
    // A ||f||^2 <= sum |<f, psi_j>|^2 <= B ||f||^2
    const double s = gpw::analyze(fs, f).squaredNorm();
    CHECK(s >= sys.A * f.squaredNorm() - 1e-9);
    CHECK(s <= sys.B * f.squaredNorm() + 1e-9);
  }
  // equality at the extreme eigenvectors of the frame operator
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.frame_operator);
  const Signal lo = sys.lift(es.eigenvectors().col(0));
  const Signal hi = sys.lift(es.eigenvectors().col(es.eigenvectors().cols() - 1));
  CHECK(gpw::analyze(fs, lo).squaredNorm() == doctest::Approx(sys.A).epsilon(1e-9));
  CHECK(gpw::analyze(fs, hi).squaredNorm() == doctest::Approx(sys.B).epsilon(1e-9));

  // orthonormal frame: Dirac at every vertex gives the identity on PW
  std::vector<Signal> diracs;
  for (std::size_t v = 0; v < 12; ++v) diracs.push_back(Signal::Unit(12, static_cast<Eigen::Index>(v)));
  const auto id = gpw::frame_from_weights(diracs, d, 1.5);
  const Signal f = gpw::random_bandlimited(d, 1.5, rng);
  CHECK((gpw::frame_operator_apply(id, f) - f).norm() < 1e-12);
  // f orthogonal to every frame vector
  const auto low = gpw::frame_from_weights({d.eigenvectors.col(0).cast<cplx>()}, d, 1.5);
  const Signal orth = gpw::random_bandlimited(d, 1.5, rng);
  const Signal orth_to_phi0 = orth - d.eigenvectors.col(0).cast<cplx>() * d.eigenvectors.col(0).cast<cplx>().dot(orth);
  CHECK(gpw::frame_operator_apply(low, orth_to_phi0).norm() < 1e-12);
}

TEST_CASE("iterative reconstruction obeys the geometric bound") {
  gpw::Rng rng(11);
  for (std::size_t n : {9u, 30u}) {
    const auto fs = cycle_triples(n);
    const auto d = gpw::decompose(fs.cover.graph);
    for (double omega : {0.2, 0.6}) {
      const auto sys = gpw::build_frame(fs, d, omega, 0.1);
      REQUIRE(sys.is_frame());
      for (int t = 0; t < 50; ++t) {
        const Signal f = gpw::random_bandlimited(d, omega, rng);
        gpw::IterativeOptions o;
        o.truth = f;
        const auto res = gpw::reconstruct_iterative(sys, gpw::analyze(fs, f), o);
        CHECK(res.converged);
        CHECK(res.rho == doctest::Approx(2.0 / (sys.A + sys.B)));
        CHECK(res.eta == doctest::Approx((sys.B - sys.A) / (sys.A + sys.B)));
        REQUIRE(res.errors.size() == res.iterations + 1);
        CHECK(res.errors[0] == doctest::Approx(f.norm()));
        for (std::size_t i = 0; i < res.errors.size(); ++i)
          CHECK(res.errors[i] <= std::pow(res.eta, static_cast<double>(i)) * f.norm() + 1e-9);
        for (std::size_t i = 1; i < res.errors.size(); ++i)
          if (res.errors[i - 1] > 1e-8)
            CHECK(res.errors[i] / res.errors[i - 1] <= res.eta + 1e-9 + 1e-14 * f.norm() / res.errors[i - 1]);
        CHECK((res.signal - f).norm() < 1e-8 * std::max(1.0, f.norm()));
      }
    }
  }
}

TEST_CASE("tight frame converges in one iteration") {
  gpw::Rng rng(5);
  const auto g = gpw::make_cycle(12);
  const auto d = gpw::decompose(g);
  std::vector<Signal> diracs;
  for (std::size_t v = 0; v < 12; ++v) diracs.push_back(Signal::Unit(12, static_cast<Eigen::Index>(v)));
  const auto sys = gpw::frame_from_weights(diracs, d, 1.0);
  CHECK(sys.A == doctest::Approx(1.0));
  CHECK(sys.B == doctest::Approx(1.0));
  const Signal f = gpw::random_bandlimited(d, 1.0, rng);
  Eigen::VectorXcd samples(12);
  for (int v = 0; v < 12; ++v) samples(v) = f(v);
  gpw::IterativeOptions o;
  o.rho = 1.0;
  o.truth = f;
  const auto res = gpw::reconstruct_iterative(sys, samples, o);
  CHECK(res.eta < 1e-12);
  REQUIRE(res.errors.size() >= 2);
  CHECK(res.errors[1] < 1e-10);
}

TEST_CASE("iterative reconstruction rejects bad input") {
  const auto fs = cycle_triples(9);
  const auto d = gpw::decompose(fs.cover.graph);
  const auto sys = gpw::build_frame(fs, d, 0.5, 1.0);
  const Eigen::VectorXcd samples = Eigen::VectorXcd::Zero(3);
  for (double rho : {0.0, -1.0, 2.0 / sys.B, 5.0}) {
    gpw::IterativeOptions o;
    o.rho = rho;
    CHECK_THROWS_AS(gpw::reconstruct_iterative(sys, samples, o), gpw::Error);
  }
  CHECK_THROWS_AS(gpw::reconstruct_iterative(sys, Eigen::VectorXcd::Zero(2)), gpw::Error);
  CHECK_THROWS_AS(gpw::build_frame(fs, d, 0.5, 0.0), gpw::Error);

  // three functionals cannot span PW_omega of dimension > 3
  const auto wide = gpw::build_frame(fs, d, 3.0, 1.0);
  CHECK(wide.dimension() > 3);
  CHECK_FALSE(wide.is_frame());
  CHECK_FALSE(gpw::uniqueness_check(wide));
  try {
    gpw::reconstruct_iterative(wide, samples);
    FAIL("non-frame accepted");
  } catch (const gpw::Error& e) {
    CHECK(e.code() == gpw::Errc::not_a_frame);
  }
  CHECK_THROWS_AS(gpw::reconstruct_dual(wide, samples), gpw::Error);
}

TEST_CASE("dual frame reconstruction") {
  gpw::Rng rng(17);
  for (std::size_t n : {9u, 30u, 60u}) {
    const auto fs = cycle_triples(n);
    const auto d = gpw::decompose(fs.cover.graph);
    const double omega = 0.5;
    const auto sys = gpw::build_frame(fs, d, omega, 0.5);
    REQUIRE(gpw::uniqueness_check(sys));

    const Signal phi0 = d.eigenvectors.col(0).cast<cplx>();
    CHECK((gpw::reconstruct_dual(sys, gpw::analyze(fs, phi0)) - phi0).norm() < 1e-8);

    const auto dual = gpw::dual_frame(sys);
    REQUIRE(dual.size() == fs.count());
    for (int t = 0; t < 50; ++t) {
      const Signal f = gpw::random_bandlimited(d, omega, rng);
      const Signal rec = gpw::reconstruct_dual(sys, gpw::analyze(fs, f));
      CHECK((rec - f).norm() < 1e-8);
      // reversed pairing: f = sum_j <f, Omega_j> P psi_j
      // <f, Omega_j> is dual_j.dot(f): Eigen conjugates the left operand
      Signal rev = Signal::Zero(f.size());
      for (std::size_t j = 0; j < dual.size(); ++j) rev += dual[j].dot(f) * sys.frame_vector(j);
      CHECK((rev - f).norm() < 1e-8);
      gpw::IterativeOptions o;
      const auto it = gpw::reconstruct_iterative(sys, gpw::analyze(fs, f), o);
      CHECK((it.signal - rec).norm() < 1e-6);
    }
  }
}

TEST_CASE("uniqueness follows rank") {
  const auto fs = cycle_triples(12);
  const auto d = gpw::decompose(fs.cover.graph);
  CHECK(gpw::uniqueness_check(gpw::build_frame(fs, d, 0.3, 1.0)));
  // dim PW_omega > |J| = 4
  CHECK(d.band_dimension(2.0) > 4);
  CHECK_FALSE(gpw::uniqueness_check(gpw::build_frame(fs, d, 2.0, 1.0)));
  CHECK_THROWS_AS(gpw::frame_from_weights(fs.weights, d, -1.0), gpw::Error);
}
