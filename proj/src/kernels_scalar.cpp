#include "gpw/kernels.hpp"

namespace gpw::kernels {
namespace {

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
  }
  return {re, im};
}

double norm2_scalar(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::norm(a[i]);
  return s;
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void laplacian_scalar(const CsrView& g, const cplx* f, cplx* out) {
  const std::size_t n = g.degree.size();
  for (std::size_t v = 0; v < n; ++v) {
    cplx acc{0.0, 0.0};
    for (std::uint32_t k = g.row_ptr[v]; k < g.row_ptr[v + 1]; ++k) acc += g.weight[k] * f[g.col[k]];
    out[v] = g.degree[v] * f[v] - acc;
  }
}

double edge_energy_scalar(const EdgeView& e, const cplx* f) {
  double s = 0.0;
  for (std::size_t k = 0; k < e.w.size(); ++k) s += e.w[k] * std::norm(f[e.u[k]] - f[e.v[k]]);
  return s;
}

constexpr KernelTable kScalar{"scalar", dot_scalar, norm2_scalar, axpy_scalar, laplacian_scalar,
                              edge_energy_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace gpw::kernels
