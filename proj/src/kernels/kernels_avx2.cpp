#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "vstar/kernels.hpp"

namespace vstar::kernels {

namespace {

// Reductions: lane-wise max/min commute, so the result equals the scalar
// reference for NaN-free input (signed zeros aside).

__attribute__((target("avx2"))) double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

__attribute__((target("avx2"))) double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_min_pd(lo, hi);
  m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

__attribute__((target("avx2"))) double max_avx2(const double* data, std::size_t n) {
  std::size_t i = 0;
  double m = data[0];
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(data);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(data + i));
    m = hmax(acc);
  }
  for (; i < n; ++i) m = data[i] > m ? data[i] : m;
  return m;
}

__attribute__((target("avx2"))) void minmax_avx2(const double* data, std::size_t n, double* lo, double* hi) {
  std::size_t i = 0;
  double a = data[0];
  double b = data[0];
  if (n >= 4) {
    __m256d vlo = _mm256_loadu_pd(data);
    __m256d vhi = vlo;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(data + i);
      vlo = _mm256_min_pd(vlo, v);
      vhi = _mm256_max_pd(vhi, v);
    }
    a = hmin(vlo);
    b = hmax(vhi);
  }
  for (; i < n; ++i) {
    a = data[i] < a ? data[i] : a;
    b = data[i] > b ? data[i] : b;
  }
  *lo = a;
  *hi = b;
}

// Separate mul and add (no FMA) to match the scalar rounding exactly.
__attribute__((target("avx2"))) void add_outer_avx2(double* out, std::size_t width, std::size_t height,
                                                    const double* col_weights, const double* row_weights,
                                                    double scale) {
  for (std::size_t r = 0; r < height; ++r) {
    const double t = scale * row_weights[r];
    const __m256d vt = _mm256_set1_pd(t);
    double* row = out + r * width;
    std::size_t c = 0;
    for (; c + 4 <= width; c += 4) {
      const __m256d prod = _mm256_mul_pd(vt, _mm256_loadu_pd(col_weights + c));
      _mm256_storeu_pd(row + c, _mm256_add_pd(_mm256_loadu_pd(row + c), prod));
    }
    for (; c < width; ++c) row[c] = row[c] + t * col_weights[c];
  }
}

__attribute__((target("avx2"))) void scale_avx2(double* data, std::size_t n, double factor) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(data + i, _mm256_mul_pd(_mm256_loadu_pd(data + i), f));
  for (; i < n; ++i) data[i] = data[i] * factor;
}

__attribute__((target("avx2"))) void quantize_avx2(const double* data, std::size_t n, double lo, double factor,
                                                   std::uint8_t* out) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vf = _mm256_set1_pd(factor);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d top = _mm256_set1_pd(255.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(data + i), vlo), vf);
    v = _mm256_floor_pd(_mm256_add_pd(v, half));
    v = _mm256_min_pd(_mm256_max_pd(v, zero), top);
    const __m128i ints = _mm256_cvttpd_epi32(v);
    alignas(16) std::int32_t lanes[4];
    _mm_store_si128(reinterpret_cast<__m128i*>(lanes), ints);
    for (int k = 0; k < 4; ++k) out[i + k] = static_cast<std::uint8_t>(lanes[k]);
  }
  for (; i < n; ++i) {
    double v = std::floor((data[i] - lo) * factor + 0.5);
    v = std::clamp(v, 0.0, 255.0);
    out[i] = static_cast<std::uint8_t>(v);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::Avx2, max_avx2, minmax_avx2, add_outer_avx2, scale_avx2, quantize_avx2};
  return t;
}

}  // namespace vstar::kernels

#endif
