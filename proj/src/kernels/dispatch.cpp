#include <atomic>
#include <cstdlib>
#include <string>

#include "vstar/error.hpp"
#include "vstar/kernels.hpp"

namespace vstar::kernels {

namespace {

std::atomic<const KernelTable*> g_override{nullptr};

const KernelTable& detect() {
  if (const char* env = std::getenv("VSTAR_KERNELS")) {
    const std::string name(env);
    if (name == "scalar") return scalar_table();
    if (name == "avx2" && supported(Isa::Avx2)) return table(Isa::Avx2);
    if (name == "neon" && supported(Isa::Neon)) return table(Isa::Neon);
  }
  if (supported(Isa::Avx2)) return table(Isa::Avx2);
  if (supported(Isa::Neon)) return table(Isa::Neon);
  return scalar_table();
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
    if (supported(isa)) out.push_back(isa);
  return out;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw InvalidArgument("kernels: ISA not supported: " + std::string(to_string(isa)));
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return avx2_table();
#endif
#if defined(__aarch64__)
    case Isa::Neon: return neon_table();
#endif
    default: return scalar_table();
  }
}

const KernelTable& active() {
  if (const KernelTable* t = g_override.load(std::memory_order_acquire)) return *t;
  static const KernelTable& detected = detect();
  return detected;
}

void set_active(Isa isa) { g_override.store(&table(isa), std::memory_order_release); }

void reset_active() { g_override.store(nullptr, std::memory_order_release); }

double max(std::span<const double> data) { return active().max(data.data(), data.size()); }

void minmax(std::span<const double> data, double& lo, double& hi) {
  active().minmax(data.data(), data.size(), &lo, &hi);
}

void add_outer(std::span<double> out, std::size_t width, std::size_t height,
               std::span<const double> col_weights, std::span<const double> row_weights, double scale) {
  if (out.size() != width * height || col_weights.size() != width || row_weights.size() != height)
    throw InvalidArgument("add_outer: size mismatch");
  active().add_outer(out.data(), width, height, col_weights.data(), row_weights.data(), scale);
}

void scale(std::span<double> data, double factor) { active().scale(data.data(), data.size(), factor); }

void quantize(std::span<const double> data, double lo, double factor, std::span<std::uint8_t> out) {
  if (out.size() != data.size()) throw InvalidArgument("quantize: size mismatch");
  active().quantize(data.data(), data.size(), lo, factor, out.data());
}

}  // namespace vstar::kernels
