#include <cstring>
#include <vector>

#include "doctest.h"
#include "vstar/kernels.hpp"
#include "vstar/rng.hpp"

using namespace vstar;
namespace k = vstar::kernels;

namespace {

std::vector<double> random_values(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar is always available") {
  CHECK(k::supported(k::Isa::Scalar));
  CHECK(k::supported_isas().front() == k::Isa::Scalar);
}

TEST_CASE("SIMD variants match the scalar reference bit for bit") {
  const k::KernelTable& ref = k::scalar_table();
  Rng rng(2024);
  for (k::Isa isa : k::supported_isas()) {
    CAPTURE(k::to_string(isa));
    const k::KernelTable& t = k::table(isa);
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1000u, 1027u}) {
      CAPTURE(n);
      const auto data = random_values(rng, n, -50.0, 50.0);
      CHECK(t.max(data.data(), n) == ref.max(data.data(), n));
      double lo1, hi1, lo2, hi2;
      t.minmax(data.data(), n, &lo1, &hi1);
      ref.minmax(data.data(), n, &lo2, &hi2);
      CHECK(lo1 == lo2);
      CHECK(hi1 == hi2);

      auto a = data, b = data;
      t.scale(a.data(), n, 0.37);
      ref.scale(b.data(), n, 0.37);
      CHECK(same_bits(a, b));

      std::vector<std::uint8_t> qa(n), qb(n);
      t.quantize(data.data(), n, lo2, 255.0 / (hi2 - lo2 + 1e-9), qa.data());
      ref.quantize(data.data(), n, lo2, 255.0 / (hi2 - lo2 + 1e-9), qb.data());
      CHECK(qa == qb);
    }
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 2}, {4, 4}, {32, 32}, {33, 7}, {128, 5}}) {
      const auto cols = random_values(rng, w, 0.0, 1.0);
      const auto rows = random_values(rng, h, 0.0, 1.0);
      auto a = random_values(rng, w * h, -1.0, 1.0);
      auto b = a;
      t.add_outer(a.data(), w, h, cols.data(), rows.data(), 6.0);
      ref.add_outer(b.data(), w, h, cols.data(), rows.data(), 6.0);
      CHECK(same_bits(a, b));
    }
  }
}

TEST_CASE("quantize rounds and clamps") {
  const std::vector<double> v{-1.0, 0.0, 0.4, 0.6, 254.5, 300.0};
  std::vector<std::uint8_t> out(v.size());
  k::scalar_table().quantize(v.data(), v.size(), 0.0, 1.0, out.data());
  CHECK(out == std::vector<std::uint8_t>{0, 0, 0, 1, 255, 255});
}

TEST_CASE("active table can be overridden") {
  k::set_active(k::Isa::Scalar);
  CHECK(k::active().isa == k::Isa::Scalar);
  k::reset_active();
  CHECK(k::supported(k::active().isa));
}

}
