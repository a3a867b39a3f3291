#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vstar/geometry.hpp"
#include "vstar/heatmap.hpp"
#include "vstar/search.hpp"

namespace vstar {

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // interleaved RGB

  RgbImage(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), pixels(w * h * 3, fill) {}
  void set(std::int64_t x, std::int64_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

/// Binary PGM (P5).
void write_pgm(const std::string& path, const GrayImage& img);
/// Binary PPM (P6).
void write_ppm(const std::string& path, const RgbImage& img);

/// Extent (0, 0, width, height) from a PNM (P2/P3/P5/P6) header.
Rect read_pnm_extent(const std::string& path);

/// Pop order drawn as numbered rectangles over a canvas whose longer side
/// is `canvas`; the located box is drawn in green.
RgbImage render_trace(const SearchTrace& t, const Rect& root, std::size_t canvas = 512);

}  // namespace vstar
