#pragma once

// Data-parallel inner loops used by the heatmap code. Every kernel has a
// scalar reference and optional SIMD variants; the SIMD variants perform
// the same IEEE operations in the same order so results match the scalar
// path bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace vstar::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  // n >= 1.
  double (*max)(const double* data, std::size_t n);
  void (*minmax)(const double* data, std::size_t n, double* lo, double* hi);
  // out[r * width + c] += (scale * row_weights[r]) * col_weights[c]
  void (*add_outer)(double* out, std::size_t width, std::size_t height, const double* col_weights,
                    const double* row_weights, double scale);
  void (*scale)(double* data, std::size_t n, double factor);
  // out[i] = clamp(floor((data[i] - lo) * factor + 0.5), 0, 255)
  void (*quantize)(const double* data, std::size_t n, double lo, double factor, std::uint8_t* out);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

/// True if the ISA was compiled in and the running CPU supports it.
bool supported(Isa isa);
std::vector<Isa> supported_isas();

/// Table for a specific ISA; throws InvalidArgument when unsupported.
const KernelTable& table(Isa isa);

/// Best supported table, unless overridden by set_active() or the
/// VSTAR_KERNELS environment variable ("scalar", "avx2", "neon").
const KernelTable& active();
void set_active(Isa isa);
void reset_active();

// Convenience wrappers over active().
double max(std::span<const double> data);
void minmax(std::span<const double> data, double& lo, double& hi);
void add_outer(std::span<double> out, std::size_t width, std::size_t height,
               std::span<const double> col_weights, std::span<const double> row_weights, double scale);
void scale(std::span<double> data, double factor);
void quantize(std::span<const double> data, double lo, double factor, std::span<std::uint8_t> out);

}  // namespace vstar::kernels
