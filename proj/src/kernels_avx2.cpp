// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached after the
// runtime CPU check in kernels_dispatch.cpp. A __m256d holds two interleaved
// complex values [re0 im0 re1 im1].

#include <immintrin.h>

#include "gpw/kernels.hpp"

namespace gpw::kernels {
namespace {

inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline __m256d load2(const cplx* f, std::uint32_t i0, std::uint32_t i1) {
  return _mm256_set_m128d(_mm_loadu_pd(raw(f + i1)), _mm_loadu_pd(raw(f + i0)));
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  // a*conj(b): re = ar*br + ai*bi, im = ai*br - ar*bi
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_x = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    const __m256d vb = _mm256_loadu_pd(raw(b + i));
    const __m256d vb_swap = _mm256_permute_pd(vb, 0b0101);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_x = _mm256_fmadd_pd(va, vb_swap, acc_x);  // [ar*bi, ai*br, ...]
  }
  alignas(32) double x[4];
  _mm256_store_pd(x, acc_x);
  double re = hsum(acc_re);
  double im = (x[1] + x[3]) - (x[0] + x[2]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
  }
  return {re, im};
}

double norm2_avx2(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(raw(a + i));
    acc = _mm256_fmadd_pd(va, va, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::norm(a[i]);
  return s;
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d p = _mm256_set1_pd(alpha.real());
  const __m256d q = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(raw(x + i));
    const __m256d vx_swap = _mm256_permute_pd(vx, 0b0101);
    // even lanes: p*xr - q*xi, odd lanes: p*xi + q*xr
    const __m256d prod = _mm256_fmaddsub_pd(p, vx, _mm256_mul_pd(q, vx_swap));
    _mm256_storeu_pd(raw(y + i), _mm256_add_pd(_mm256_loadu_pd(raw(y + i)), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void laplacian_avx2(const CsrView& g, const cplx* f, cplx* out) {
  const std::size_t n = g.degree.size();
  for (std::size_t v = 0; v < n; ++v) {
    std::uint32_t k = g.row_ptr[v];
    const std::uint32_t end = g.row_ptr[v + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 2 <= end; k += 2) {
      const __m256d w = _mm256_set_pd(g.weight[k + 1], g.weight[k + 1], g.weight[k], g.weight[k]);
      acc = _mm256_fmadd_pd(w, load2(f, g.col[k], g.col[k + 1]), acc);
    }
    __m128d sum = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    if (k < end) sum = _mm_fmadd_pd(_mm_set1_pd(g.weight[k]), _mm_loadu_pd(raw(f + g.col[k])), sum);
    const __m128d self = _mm_mul_pd(_mm_set1_pd(g.degree[v]), _mm_loadu_pd(raw(f + v)));
    _mm_storeu_pd(raw(out + v), _mm_sub_pd(self, sum));
  }
}

double edge_energy_avx2(const EdgeView& e, const cplx* f) {
  const std::size_t m = e.w.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= m; k += 2) {
    const __m256d d = _mm256_sub_pd(load2(f, e.u[k], e.u[k + 1]), load2(f, e.v[k], e.v[k + 1]));
    const __m256d w = _mm256_set_pd(e.w[k + 1], e.w[k + 1], e.w[k], e.w[k]);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(w, d), d, acc);
  }
  double s = hsum(acc);
  for (; k < m; ++k) s += e.w[k] * std::norm(f[e.u[k]] - f[e.v[k]]);
  return s;
}

constexpr KernelTable kAvx2{"avx2", dot_avx2, norm2_avx2, axpy_avx2, laplacian_avx2, edge_energy_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace gpw::kernels
