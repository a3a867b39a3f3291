#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "vstar/error.hpp"
#include "vstar/heatmap.hpp"
#include "vstar/json_io.hpp"
#include "vstar/rng.hpp"

using namespace vstar;

namespace {

// Brute force: scan every cell, keep those whose center lies in the patch.
double covered_max(const Heatmap& h, const Rect& patch) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < h.height(); ++r)
    for (std::size_t c = 0; c < h.width(); ++c) {
      const double cx = h.frame().x + (c + 0.5) * h.frame().w / double(h.width());
      const double cy = h.frame().y + (r + 0.5) * h.frame().h / double(h.height());
      if (cx >= patch.x && cx < patch.right() && cy >= patch.y && cy < patch.bottom()) best = std::max(best, h.at(c, r));
    }
  return best;
}

Heatmap random_heatmap(Rng& rng, std::size_t w, std::size_t h, Rect frame) {
  std::vector<double> v(w * h);
  for (auto& x : v) x = rng.uniform(-3.0, 9.0);
  return Heatmap(w, h, frame, v);
}

}  // namespace

TEST_SUITE("heatmap") {

TEST_CASE("construction rejects bad grids") {
  CHECK_THROWS_AS(Heatmap(0, 1, {0, 0, 10, 10}, {}), InvalidArgument);
  CHECK_THROWS_AS(Heatmap(2, 2, {0, 0, 10, 10}, {1, 2, 3}), InvalidArgument);
  CHECK_THROWS_AS(Heatmap(1, 1, {0, 0, 10, 10}, {std::nan("")}), InvalidArgument);
  CHECK_THROWS_AS(Heatmap(1, 1, {0, 0, 10, 10}, {std::numeric_limits<double>::infinity()}), InvalidArgument);
}

TEST_CASE("max_value examples") {
  CHECK(max_value(Heatmap(2, 2, {0, 0, 2, 2}, {0, 0, 0, 5.1})) == 5.1);
  CHECK(max_value(Heatmap::zeros(4, 4, {0, 0, 4, 4})) == 0.0);
}

TEST_CASE("patch_priority examples") {
  Heatmap h = Heatmap::zeros(4, 4, {0, 0, 400, 400});
  h.mutable_values()[1 * 4 + 2] = 5.0;
  CHECK(patch_priority(h, {200, 0, 200, 200}) == 5.0);
  CHECK(patch_priority(h, {0, 0, 200, 200}) == 0.0);
  CHECK(patch_priority(Heatmap::zeros(4, 4, {0, 0, 400, 400}), {0, 0, 400, 400}) == 0.0);
  CHECK_THROWS_AS(patch_priority(h, {300, 300, 200, 200}), InvalidArgument);
}

TEST_CASE("quadrant priority equals brute-force max over covered cells") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Heatmap h = random_heatmap(rng, 8, 8, {0, 0, 800, 800});
    for (const Rect& q : {Rect{0, 0, 400, 400}, Rect{400, 0, 400, 400}, Rect{0, 400, 400, 400}, Rect{400, 400, 400, 400}}) {
      double expect = -1e300;
      const std::int64_t c0 = q.x / 100, r0 = q.y / 100;
      for (std::int64_t r = r0; r < r0 + 4; ++r)
        for (std::int64_t c = c0; c < c0 + 4; ++c) expect = std::max(expect, h.at(c, r));
      CHECK(patch_priority(h, q) == expect);
    }
  }
}

TEST_CASE("random patches match the brute-force scan") {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const Rect frame{rng.between(0, 100), rng.between(0, 100), rng.between(50, 3000), rng.between(50, 3000)};
    const Heatmap h = random_heatmap(rng, rng.between(1, 40), rng.between(1, 40), frame);
    const std::int64_t w = rng.between(1, frame.w), hh = rng.between(1, frame.h);
    const Rect p{frame.x + rng.between(0, frame.w - w), frame.y + rng.between(0, frame.h - hh), w, hh};
    const double brute = covered_max(h, p);
    if (std::isinf(brute)) {
      // Nothing covered: the cell holding the patch center answers.
      const double px = p.x + p.w / 2.0, py = p.y + p.h / 2.0;
      const auto c = std::min<std::size_t>(h.width() - 1, std::size_t((px - frame.x) / h.cell_width()));
      const auto r = std::min<std::size_t>(h.height() - 1, std::size_t((py - frame.y) / h.cell_height()));
      CHECK(patch_priority(h, p) == h.at(c, r));
    } else {
      CHECK(patch_priority(h, p) == brute);
    }
  }
}

TEST_CASE("parent priority is the max of its children's") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Heatmap h = random_heatmap(rng, 16, 16, {0, 0, 1600, 1600});
    const Rect parent{0, 0, 800, 800};
    const double kids = std::max(std::max(patch_priority(h, {0, 0, 400, 400}), patch_priority(h, {400, 0, 400, 400})),
                                 std::max(patch_priority(h, {0, 400, 400, 400}), patch_priority(h, {400, 400, 400, 400})));
    CHECK(patch_priority(h, parent) == kids);
  }
}

TEST_CASE("positive scaling preserves the priority order") {
  Rng rng(33);
  const Heatmap h = random_heatmap(rng, 8, 8, {0, 0, 800, 800});
  std::vector<double> scaled(h.values().begin(), h.values().end());
  for (auto& v : scaled) v *= 2.5;
  const Heatmap g(8, 8, h.frame(), scaled);
  const std::vector<Rect> quads{{0, 0, 400, 400}, {400, 0, 400, 400}, {0, 400, 400, 400}, {400, 400, 400, 400}};
  for (const Rect& a : quads)
    for (const Rect& b : quads) CHECK((patch_priority(h, a) < patch_priority(h, b)) == (patch_priority(g, a) < patch_priority(g, b)));
}

TEST_CASE("two Gaussians sum to the closed form at every cell center") {
  Heatmap h = Heatmap::zeros(10, 6, {0, 0, 1000, 600});
  add_gaussian(h, 250.0, 150.0, 120.0, 6.0);
  add_gaussian(h, 720.0, 480.0, 80.0, 2.0);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 10; ++c) {
      const double x = 100.0 * c + 50.0, y = 100.0 * r + 50.0;
      const double a = (x - 250) * (x - 250) + (y - 150) * (y - 150);
      const double b = (x - 720) * (x - 720) + (y - 480) * (y - 480);
      const double expect = 6.0 * std::exp(-a / (2 * 120.0 * 120.0)) + 2.0 * std::exp(-b / (2 * 80.0 * 80.0));
      CHECK(h.at(c, r) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("footprint sampling gives the containing cell full amplitude") {
  Heatmap h = Heatmap::zeros(32, 32, {0, 0, 2048, 2048});
  add_gaussian(h, 1500.0, 70.0, 60.0, 6.0, SampleMode::CellFootprint);
  const std::size_t c = 1500 / 64, r = 70 / 64;
  CHECK(h.at(c, r) == 6.0);
  for (std::size_t rr = 0; rr < 32; ++rr)
    for (std::size_t cc = 0; cc < 32; ++cc)
      if (cc != c || rr != r) CHECK(h.at(cc, rr) < 6.0);
}

TEST_CASE("fixation heatmap examples") {
  FixationSequence f;
  f.image_extent = {0, 0, 3300, 3300};
  const Heatmap empty = fixations_to_heatmap(f, 0.9, 100.0, 33, 33);
  CHECK(max_value(empty) == 0.0);

  f.points = {{1650.0, 1650.0}};
  const Heatmap one = fixations_to_heatmap(f, 0.9, 200.0, 33, 33, 6.0);
  CHECK(max_value(one) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(one.at(16, 16) == max_value(one));
  CHECK(one.at(15, 16) < one.at(16, 16));

  CHECK_THROWS_AS(fixations_to_heatmap(f, 1.0, 100.0, 8, 8), InvalidArgument);
  CHECK_THROWS_AS(fixations_to_heatmap(f, 0.0, 100.0, 8, 8), InvalidArgument);
  CHECK_THROWS_AS(fixations_to_heatmap(f, 0.5, 0.0, 8, 8), InvalidArgument);
  f.points.push_back({4000.0, 10.0});
  CHECK_THROWS_AS(fixations_to_heatmap(f, 0.5, 10.0, 8, 8), InvalidArgument);
}

TEST_CASE("fixation density weights decay with order") {
  FixationSequence f;
  f.image_extent = {0, 0, 1000, 1000};
  f.points = {{150, 150}, {850, 850}, {850, 150}};
  const Heatmap h = fixation_density(f, 0.5, 30.0, f.image_extent, 10, 10);
  const double far = std::exp(-(700.0 * 700.0) / (2 * 900.0));
  CHECK(h.at(1, 1) == doctest::Approx(1.0 + 0.5 * far * far + 0.25 * far).epsilon(1e-9));
  CHECK(h.at(8, 8) == doctest::Approx(0.5 + far * far + 0.25 * far).epsilon(1e-9));
  CHECK(h.at(8, 1) == doctest::Approx(0.25 + far + 0.5 * far).epsilon(1e-9));
  CHECK(default_fixation_sigma({0, 0, 1600, 800}) == 100.0);
}

TEST_CASE("render_heatmap maps min to 0 and max to 255") {
  const GrayImage black = render_heatmap(Heatmap::zeros(4, 4, {0, 0, 4, 4}));
  for (auto p : black.pixels) CHECK(p == 0);

  const GrayImage two = render_heatmap(Heatmap(2, 1, {0, 0, 2, 1}, {0.0, 6.0}));
  CHECK(two.pixels == std::vector<std::uint8_t>{0, 255});

  std::vector<double> ramp(64);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = -2.0 + 0.137 * double(i);
  const GrayImage g = render_heatmap(Heatmap(8, 8, {0, 0, 8, 8}, ramp));
  CHECK(g.pixels.front() == 0);
  CHECK(g.pixels.back() == 255);
  for (std::size_t i = 1; i < g.pixels.size(); ++i) CHECK(g.pixels[i] >= g.pixels[i - 1]);
}

TEST_CASE("heatmap json round trip") {
  Rng rng(3);
  const Heatmap h = random_heatmap(rng, 5, 3, {10, 20, 500, 300});
  CHECK(heatmap_from_json(heatmap_to_json(h)) == h);
}

}
