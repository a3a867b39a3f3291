#if defined(__aarch64__)

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "vstar/kernels.hpp"

namespace vstar::kernels {

namespace {

double max_neon(const double* data, std::size_t n) {
  std::size_t i = 0;
  double m = data[0];
  if (n >= 2) {
    float64x2_t acc = vld1q_f64(data);
    for (i = 2; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(data + i));
    m = vmaxvq_f64(acc);
  }
  for (; i < n; ++i) m = data[i] > m ? data[i] : m;
  return m;
}

void minmax_neon(const double* data, std::size_t n, double* lo, double* hi) {
  std::size_t i = 0;
  double a = data[0];
  double b = data[0];
  if (n >= 2) {
    float64x2_t vlo = vld1q_f64(data);
    float64x2_t vhi = vlo;
    for (i = 2; i + 2 <= n; i += 2) {
      const float64x2_t v = vld1q_f64(data + i);
      vlo = vminq_f64(vlo, v);
      vhi = vmaxq_f64(vhi, v);
    }
    a = vminvq_f64(vlo);
    b = vmaxvq_f64(vhi);
  }
  for (; i < n; ++i) {
    a = data[i] < a ? data[i] : a;
    b = data[i] > b ? data[i] : b;
  }
  *lo = a;
  *hi = b;
}

void add_outer_neon(double* out, std::size_t width, std::size_t height, const double* col_weights,
                    const double* row_weights, double scale) {
  for (std::size_t r = 0; r < height; ++r) {
    const double t = scale * row_weights[r];
    const float64x2_t vt = vdupq_n_f64(t);
    double* row = out + r * width;
    std::size_t c = 0;
    for (; c + 2 <= width; c += 2) {
      const float64x2_t prod = vmulq_f64(vt, vld1q_f64(col_weights + c));
      vst1q_f64(row + c, vaddq_f64(vld1q_f64(row + c), prod));
    }
    for (; c < width; ++c) row[c] = row[c] + t * col_weights[c];
  }
}

void scale_neon(double* data, std::size_t n, double factor) {
  const float64x2_t f = vdupq_n_f64(factor);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(data + i, vmulq_f64(vld1q_f64(data + i), f));
  for (; i < n; ++i) data[i] = data[i] * factor;
}

void quantize_neon(const double* data, std::size_t n, double lo, double factor, std::uint8_t* out) {
  const float64x2_t vlo = vdupq_n_f64(lo);
  const float64x2_t vf = vdupq_n_f64(factor);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t top = vdupq_n_f64(255.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vmulq_f64(vsubq_f64(vld1q_f64(data + i), vlo), vf);
    v = vrndmq_f64(vaddq_f64(v, half));
    v = vminq_f64(vmaxq_f64(v, zero), top);
    out[i] = static_cast<std::uint8_t>(vgetq_lane_f64(v, 0));
    out[i + 1] = static_cast<std::uint8_t>(vgetq_lane_f64(v, 1));
  }
  for (; i < n; ++i) {
    double v = std::floor((data[i] - lo) * factor + 0.5);
    v = std::clamp(v, 0.0, 255.0);
    out[i] = static_cast<std::uint8_t>(v);
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{Isa::Neon, max_neon, minmax_neon, add_outer_neon, scale_neon, quantize_neon};
  return t;
}

}  // namespace vstar::kernels

#endif
