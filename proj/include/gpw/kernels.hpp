#pragma once

// Inner-loop arithmetic on complex signals. Every kernel has a scalar
// reference implementation; an AVX2+FMA variant is compiled on x86-64 and
// selected at runtime when the CPU supports it. Set GPW_SIMD=scalar to force
// the reference path.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace gpw::kernels {

using cplx = std::complex<double>;

// Compressed adjacency of a weighted graph. Row v lists (col[k], weight[k])
// for k in [row_ptr[v], row_ptr[v+1]); degree[v] is the weighted row sum.
struct CsrView {
  std::span<const std::uint32_t> row_ptr;
  std::span<const std::uint32_t> col;
  std::span<const double> weight;
  std::span<const double> degree;
};

// Unordered edge list: edge e joins u[e] and v[e] with weight w[e].
struct EdgeView {
  std::span<const std::uint32_t> u;
  std::span<const std::uint32_t> v;
  std::span<const double> w;
};

struct KernelTable {
  const char* name;
  // sum_i a[i] * conj(b[i])
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  // sum_i |a[i]|^2
  double (*norm2)(const cplx* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // out[v] = degree[v] f[v] - sum_u w(v,u) f[u]
  void (*laplacian)(const CsrView& g, const cplx* f, cplx* out);
  // sum_e w[e] |f[u[e]] - f[v[e]]|^2
  double (*edge_energy)(const EdgeView& e, const cplx* f);
};

const KernelTable& scalar();
// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2();
// Table chosen at first use: AVX2 when available, unless GPW_SIMD=scalar.
const KernelTable& active();

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double norm2(std::span<const cplx> a) { return active().norm2(a.data(), a.size()); }
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
const KernelTable* avx2_table();  // defined in kernels_avx2.cpp when compiled
}

}  // namespace gpw::kernels
