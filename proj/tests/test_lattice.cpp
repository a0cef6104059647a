#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpw/error.hpp"
#include "gpw/lattice.hpp"
#include "oracles.hpp"

using gpw::cplx;
using gpw::Signal;

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void check_multiset(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  const auto sa = oracle::sorted(a), sb = oracle::sorted(b);
  for (std::size_t i = 0; i < sa.size(); ++i) CHECK(std::abs(sa[i] - sb[i]) <= tol);
}

const gpw::Discrepancy& find(const std::vector<gpw::Discrepancy>& ds, const std::string& q) {
  for (const auto& d : ds)
    if (d.quantity == q) return d;
  FAIL("missing discrepancy " << q);
  return ds.front();
}

}  // namespace

TEST_CASE("closed-form spectra") {
  for (std::size_t n = 3; n <= 64; ++n) {
    const auto d = gpw::decompose(gpw::make_cycle(n));
    check_multiset(to_vec(d.eigenvalues), gpw::cycle_spectrum(n), 1e-9);
    for (double l : gpw::cycle_spectrum(n)) CHECK((l >= -1e-12 && l <= 4 + 1e-12));
    // brute-force oracle on the same Laplacian
    check_multiset(to_vec(oracle::jacobi_eigen(oracle::laplacian(static_cast<int>(n), oracle::cycle_edges(static_cast<int>(n)))).first),
                   gpw::cycle_spectrum(n), 1e-9);
  }
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto d = gpw::decompose(gpw::make_path(n));
    check_multiset(to_vec(d.eigenvalues), gpw::path_spectrum(n), 1e-9);
    CHECK(d.lambda_max() < 4.0);
  }
  check_multiset(gpw::path_spectrum(3), {0, 1, 3}, 1e-12);
  check_multiset(gpw::path_spectrum(2), {0, 2}, 1e-12);
  check_multiset(gpw::path_spectrum_shifted_formula(3), {0, 2, 4}, 1e-12);
  check_multiset(gpw::path_spectrum_shifted_formula(2), {0, 4}, 1e-12);
  check_multiset(gpw::cycle_spectrum(4), {0, 2, 2, 4}, 1e-12);
  check_multiset(gpw::cycle_spectrum(3), {0, 3, 3}, 1e-12);
  CHECK(gpw::decompose(gpw::make_path(200)).lambda_max() > 3.999);

  CHECK_THROWS_AS(gpw::make_path(1), gpw::Error);
  CHECK_THROWS_AS(gpw::make_cycle(2), gpw::Error);
}

TEST_CASE("triple fixture constants are computed") {
  for (auto kind : {gpw::LatticeKind::path, gpw::LatticeKind::cycle})
    for (std::size_t n : {9u, 30u, 99u}) {
      const auto fix = gpw::triple_cover_fixture(n, kind);
      CHECK(fix.functionals.count() == n / 3);
      check_multiset(fix.induced_spectrum, {0, 1, 3}, 1e-9);
      for (std::size_t j = 0; j < fix.functionals.count(); ++j) CHECK(fix.functionals.theta(j) == doctest::Approx(1.0));
      CHECK(fix.constants.theta_max == doctest::Approx(1.0));
      CHECK(fix.constants.lambda_min == doctest::Approx(1.0));
      CHECK(fix.constants.c == doctest::Approx(3.0));
      CHECK(fix.constants.C == doctest::Approx(1.0));
      CHECK(std::abs(fix.omega_threshold() - fix.constants.lambda_min / fix.constants.theta_max) <= 1e-9);
      CHECK(fix.admissible_upper(1.0) == doctest::Approx(0.5));
      CHECK(fix.gamma(0.25, 1.0) == doctest::Approx(0.5));
    }
  CHECK_THROWS_AS(gpw::triple_cover_fixture(10, gpw::LatticeKind::cycle), gpw::Error);
}

TEST_CASE("discrepancies are surfaced, not corrected") {
  const auto path = gpw::lattice_discrepancies(gpw::triple_cover_fixture(9, gpw::LatticeKind::path));
  const auto& induced = find(path, "induced_triple_spectrum");
  CHECK_FALSE(induced.agrees);
  CHECK(induced.stated == std::vector<double>{0, 2, 4});
  CHECK(induced.max_abs_difference == doctest::Approx(1.0));
  CHECK_FALSE(find(path, "lambda_S").agrees);
  CHECK_FALSE(find(path, "omega_threshold").agrees);
  CHECK_FALSE(find(path, "c").agrees);
  CHECK_FALSE(find(path, "path_spectrum_formula_pi_over_N_minus_1").agrees);

  const auto cycle = gpw::lattice_discrepancies(gpw::triple_cover_fixture(30, gpw::LatticeKind::cycle));
  CHECK(find(cycle, "cycle_spectrum_formula").agrees);
  CHECK_FALSE(find(cycle, "induced_triple_spectrum").agrees);
}

TEST_CASE("experiments inside the admissible range") {
  const auto fix = gpw::triple_cover_fixture(30, gpw::LatticeKind::cycle);
  for (auto method : {gpw::ReconMethod::frame, gpw::ReconMethod::spline}) {
    gpw::LatticeOptions o;
    o.method = method;
    o.epsilon = 0.1;
    o.omega = 0.8;
    o.trials = 10;
    o.seed = 2;
    const auto r = gpw::run_lattice_experiment(fix, o);
    CHECK(r.admissible);
    CHECK(r.reconstructible);
    CHECK(r.bounds_respected);
    CHECK(r.within_contract);
    CHECK(r.errors.size() == 10);
    for (std::size_t t = 0; t < r.errors.size(); ++t) CHECK(r.errors[t] < 1e-6);
    CHECK(r.gamma == doctest::Approx(0.88));
    // eigenvalues strictly below Lambda / Theta = 1 on C_30: 0 and four pairs
    CHECK(r.eigenvectors.size() == 9);
    for (const auto& e : r.eigenvectors) {
      CHECK(e.eigenvalue < r.omega_threshold);
      CHECK(e.error < 1e-8);
    }
    if (method == gpw::ReconMethod::spline) {
      REQUIRE(r.spline_rows.size() == o.k_list.size());
      for (const auto& row : r.spline_rows) REQUIRE(row.relative_bound.has_value());
    } else {
      CHECK(r.eta == doctest::Approx((r.B - r.A) / (r.A + r.B)));
    }
  }
}

TEST_CASE("both methods agree on the same signals") {
  const auto fix = gpw::triple_cover_fixture(30, gpw::LatticeKind::path);
  gpw::LatticeOptions o;
  o.omega = 0.4;
  o.trials = 5;
  o.seed = 9;
  o.method = gpw::ReconMethod::frame;
  const auto a = gpw::run_lattice_experiment(fix, o);
  o.method = gpw::ReconMethod::spline;
  const auto b = gpw::run_lattice_experiment(fix, o);
  REQUIRE(a.norms == b.norms);  // same seed, same signals
  for (std::size_t t = 0; t < a.errors.size(); ++t) CHECK(std::abs(a.errors[t] - b.errors[t]) < 1e-6);
}

TEST_CASE("inadmissible bandwidth") {
  const auto fix = gpw::triple_cover_fixture(30, gpw::LatticeKind::cycle);
  gpw::LatticeOptions o;
  o.omega = 2.0;
  o.epsilon = 0.1;
  try {
    gpw::run_lattice_experiment(fix, o);
    FAIL("inadmissible omega accepted");
  } catch (const gpw::AdmissibilityError& e) {
    CHECK(e.upper() == doctest::Approx(1.0 / 1.1));
    CHECK(e.code() == gpw::Errc::inadmissible);
  }
  o.strict_admissibility = false;
  for (auto method : {gpw::ReconMethod::frame, gpw::ReconMethod::spline}) {
    o.method = method;
    const auto r = gpw::run_lattice_experiment(fix, o);
    CHECK_FALSE(r.admissible);
    CHECK(r.pw_dimension > r.sample_count);
    CHECK_FALSE(r.reconstructible);
  }
  o.epsilon = 0.0;
  CHECK_THROWS_AS(gpw::run_lattice_experiment(fix, o), gpw::Error);
}
