#pragma once

#include <random>

#include "gpw/graph.hpp"
#include "gpw/spectral.hpp"

namespace gpw {

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
inline Signal random_signal(std::size_t n, Rng& rng, bool complex_values = true) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Signal f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double re = normal(rng);
    f(i) = cplx(re, complex_values ? normal(rng) : 0.0);
  }
  return f;
}

/// Random element of PW_omega(L): normal coefficients on the band.
inline Signal random_bandlimited(const SpectralDecomposition& d, double omega, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(d.band_dimension(omega));
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d.size()));
  c.head(m) = random_signal(static_cast<std::size_t>(m), rng);
  return d.synthesize(c);
}

}  // namespace gpw
