#include <algorithm>
#include <cmath>

#include "vstar/kernels.hpp"

namespace vstar::kernels {

namespace {

double max_scalar(const double* data, std::size_t n) {
  double m = data[0];
  for (std::size_t i = 1; i < n; ++i) m = data[i] > m ? data[i] : m;
  return m;
}

void minmax_scalar(const double* data, std::size_t n, double* lo, double* hi) {
  double a = data[0];
  double b = data[0];
  for (std::size_t i = 1; i < n; ++i) {
    a = data[i] < a ? data[i] : a;
    b = data[i] > b ? data[i] : b;
  }
  *lo = a;
  *hi = b;
}

void add_outer_scalar(double* out, std::size_t width, std::size_t height, const double* col_weights,
                      const double* row_weights, double scale) {
  for (std::size_t r = 0; r < height; ++r) {
    const double t = scale * row_weights[r];
    double* row = out + r * width;
    for (std::size_t c = 0; c < width; ++c) row[c] = row[c] + t * col_weights[c];
  }
}

void scale_scalar(double* data, std::size_t n, double factor) {
  for (std::size_t i = 0; i < n; ++i) data[i] = data[i] * factor;
}

void quantize_scalar(const double* data, std::size_t n, double lo, double factor, std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::floor((data[i] - lo) * factor + 0.5);
    v = std::clamp(v, 0.0, 255.0);
    out[i] = static_cast<std::uint8_t>(v);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::Scalar, max_scalar, minmax_scalar, add_outer_scalar, scale_scalar,
                             quantize_scalar};
  return t;
}

}  // namespace vstar::kernels
