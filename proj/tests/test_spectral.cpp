#include <random>

#include "doctest.h"
#include "gpw/error.hpp"
#include "gpw/spectral.hpp"
#include "oracles.hpp"

using gpw::cplx;
using gpw::Signal;

namespace {

void check_spectrum(const gpw::WeightedGraph& g, std::vector<double> expected) {
  const auto d = gpw::decompose(g);
  REQUIRE(d.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(d.eigenvalues(static_cast<Eigen::Index>(i)) == doctest::Approx(expected[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("small spectra") {
  check_spectrum(gpw::build_graph({{0, 1, 1.0}}), {0.0, 2.0});
  check_spectrum(gpw::build_graph({{0, 1, 1.0}, {1, 2, 1.0}}), {0.0, 1.0, 3.0});
  check_spectrum(oracle::to_graph(4, oracle::cycle_edges(4)), {0.0, 2.0, 2.0, 4.0});
  check_spectrum(oracle::to_graph(3, oracle::cycle_edges(3)), {0.0, 3.0, 3.0});
}

TEST_CASE("decomposition invariants against the Jacobi oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 64);
    const auto edges = oracle::random_connected(n, rng);
    const auto g = oracle::to_graph(n, edges);
    const Eigen::MatrixXd l = oracle::laplacian(n, edges);
    const auto d = gpw::decompose(g);
    const auto [ref_vals, ref_vecs] = oracle::jacobi_eigen(l);
    const double scale = std::max(1.0, ref_vals(n - 1));
    for (int i = 0; i < n; ++i) CHECK(std::abs(d.eigenvalues(i) - ref_vals(i)) <= 1e-9 * scale);
    CHECK(d.eigenvalues(0) == 0.0);
    if (n > 1) CHECK(d.eigenvalues(1) > 0.0);
    CHECK((d.eigenvectors.transpose() * d.eigenvectors - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-10);
    CHECK((l * d.eigenvectors - d.eigenvectors * d.eigenvalues.asDiagonal()).norm() <= 1e-9 * scale * n);
    // phi_0 = chi / sqrt(N) with the positive sign convention
    CHECK((d.eigenvectors.col(0) - Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(n))).norm() < 1e-10);
    for (int k = 0; k < n; ++k) {
      int first = 0;
      while (std::abs(d.eigenvectors(first, k)) <= 1e-12) ++first;
      CHECK(d.eigenvectors(first, k) > 0.0);
    }
  }
}

TEST_CASE("eigenvalue ties are snapped to a common value") {
  const auto d = gpw::decompose(oracle::to_graph(12, oracle::cycle_edges(12)));
  for (Eigen::Index k = 1; k + 1 < 12; k += 2) CHECK(d.eigenvalues(k) == d.eigenvalues(k + 1));
  // A cutoff at a repeated eigenvalue never splits the eigenspace.
  CHECK(d.band_dimension(d.eigenvalues(1)) == 3);
}

TEST_CASE("pw_project") {
  const auto k2 = gpw::decompose(gpw::build_graph({{0, 1, 1.0}}));
  Signal f(2);
  f << 1.0, 0.0;
  const Signal p = gpw::pw_project(k2, f, 1.0);
  CHECK(std::abs(p(0) - 0.5) < 1e-15);
  CHECK(std::abs(p(1) - 0.5) < 1e-15);

  std::mt19937_64 rng(22);
  const int n = 30;
  const auto edges = oracle::random_connected(n, rng);
  const auto d = gpw::decompose(oracle::to_graph(n, edges));
  const Signal g = oracle::random_vector(n, rng);
  CHECK((gpw::pw_project(d, g, d.lambda_max()) - g).norm() < 1e-12 * g.norm());
  const Signal mean = gpw::pw_project(d, g, 0.0);
  CHECK((mean - Signal::Constant(n, g.mean())).norm() < 1e-12 * g.norm());
  for (double omega : {0.5, 2.0, 7.0}) {
    const Signal q = gpw::pw_project(d, g, omega);
    CHECK((gpw::pw_project(d, q, omega) - q).norm() < 1e-10 * g.norm());
    const Signal h = oracle::random_vector(n, rng);
    CHECK(std::abs(gpw::inner(q, h) - gpw::inner(g, gpw::pw_project(d, h, omega))) < 1e-10 * g.norm() * h.norm());
    CHECK(gpw::paley_wiener(d, omega).dimension() == d.band_dimension(omega));
  }
  CHECK(std::abs(d.coefficients(g).squaredNorm() - g.squaredNorm()) < 1e-10 * g.squaredNorm());
  CHECK_THROWS_AS(gpw::pw_project(d, g, -1.0), gpw::Error);
}

TEST_CASE("apply_power") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 62);
    const auto edges = oracle::random_connected(n, rng);
    const auto g = oracle::to_graph(n, edges);
    const auto d = gpw::decompose(g);
    const Signal f = oracle::random_vector(n, rng);
    const double scale = d.lambda_max() * f.norm();
    CHECK((gpw::apply_power(d, f, 1.0) - gpw::laplacian_apply(g, f)).norm() <= 1e-9 * scale);
    const Signal half = gpw::apply_power(d, gpw::apply_power(d, f, 0.5), 0.5);
    CHECK((half - gpw::laplacian_apply(g, f)).norm() <= 1e-9 * scale);
    CHECK((gpw::apply_power(d, f, 0.0) - f).norm() == 0.0);
    CHECK(std::sqrt(gpw::half_power_energy(d, f)) == doctest::Approx(gpw::gradient_norm(g, f)).epsilon(1e-9));
    CHECK_THROWS_AS(gpw::apply_power(d, f, -1.0), gpw::Error);
    const Signal centered = f - Signal::Constant(n, f.mean());
    const Signal back = gpw::apply_power(d, gpw::apply_power(d, centered, -1.0), 1.0);
    CHECK((back - centered).norm() <= 1e-8 * centered.norm() * std::max(1.0, d.lambda_max() / *d.first_nonzero()));
  }
}

TEST_CASE("Bernstein inequality characterizes PW_omega") {
  std::mt19937_64 rng(24);
  const int n = 40;
  const auto d = gpw::decompose(oracle::to_graph(n, oracle::random_connected(n, rng)));
  const Eigen::Index top = n - 1;
  const Signal phi_max = d.eigenvectors.col(top).cast<cplx>();
  CHECK_FALSE(gpw::bernstein_holds(d, phi_max, 0.99 * d.lambda_max(), 1.0));
  for (Eigen::Index k = 0; k < n; k += 7) {
    const Signal phi = d.eigenvectors.col(k).cast<cplx>();
    for (double s : {0.5, 1.0, 2.0, 4.0}) CHECK(gpw::bernstein_holds(d, phi, d.eigenvalues(k), s));
  }
  for (int t = 0; t < 30; ++t) {
    const double omega = d.lambda_max() * std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const Signal f = oracle::random_vector(n, rng);
    const Signal p = gpw::pw_project(d, f, omega);
    for (double s : {0.5, 1.0, 2.0, 4.0}) CHECK(gpw::bernstein_holds(d, p, omega, s));
    // Outside PW_omega some tested power fails.
    const Signal q = p + 10.0 * p.norm() * phi_max;
    bool all = true;
    for (double s : {0.5, 1.0, 2.0, 4.0}) all = all && gpw::bernstein_holds(d, q, omega, s);
    CHECK_FALSE(all);
  }
}
