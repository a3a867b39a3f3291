#include "vstar/image.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

#include "vstar/error.hpp"
#include "vstar/json_io.hpp"

namespace vstar {

namespace {

// 3x5 digit glyphs, one row per entry, MSB = leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits = {{
    {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7},
}};

void draw_rect(RgbImage& img, std::int64_t x0, std::int64_t y0, std::int64_t x1, std::int64_t y1,
               std::array<std::uint8_t, 3> c) {
  for (std::int64_t x = x0; x <= x1; ++x) {
    img.set(x, y0, c[0], c[1], c[2]);
    img.set(x, y1, c[0], c[1], c[2]);
  }
  for (std::int64_t y = y0; y <= y1; ++y) {
    img.set(x0, y, c[0], c[1], c[2]);
    img.set(x1, y, c[0], c[1], c[2]);
  }
}

void draw_number(RgbImage& img, std::int64_t x, std::int64_t y, std::size_t n, int scale) {
  const std::string digits = std::to_string(n);
  for (char ch : digits) {
    const auto& glyph = kDigits[static_cast<std::size_t>(ch - '0')];
    for (int row = 0; row < 5; ++row)
      for (int col = 0; col < 3; ++col)
        if (glyph[row] & (4 >> col))
          for (int dy = 0; dy < scale; ++dy)
            for (int dx = 0; dx < scale; ++dx) img.set(x + col * scale + dx, y + row * scale + dy, 255, 255, 0);
    x += 4 * scale;
  }
}

std::string next_token(std::istream& in) {
  std::string tok;
  char c = 0;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok += c;
  }
  return tok;
}

}  // namespace

void RgbImage::set(std::int64_t x, std::int64_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= static_cast<std::int64_t>(width) || y >= static_cast<std::int64_t>(height)) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)) * 3;
  pixels[i] = r;
  pixels[i + 1] = g;
  pixels[i + 2] = b;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  std::string data = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  data.append(img.pixels.begin(), img.pixels.end());
  write_text_file(path, data);
}

void write_ppm(const std::string& path, const RgbImage& img) {
  std::string data = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  data.append(img.pixels.begin(), img.pixels.end());
  write_text_file(path, data);
}

Rect read_pnm_extent(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6")
    throw DataError(path + ": not a PNM image");
  try {
    const long long w = std::stoll(next_token(in));
    const long long h = std::stoll(next_token(in));
    if (w < 1 || h < 1) throw DataError(path + ": bad dimensions");
    return Rect{0, 0, w, h};
  } catch (const std::logic_error&) {
    throw DataError(path + ": bad PNM header");
  }
}

RgbImage render_trace(const SearchTrace& t, const Rect& root, std::size_t canvas) {
  const double scale = static_cast<double>(canvas) / static_cast<double>(std::max(root.w, root.h));
  const auto cw = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(root.w) * scale)));
  const auto ch = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(root.h) * scale)));
  RgbImage img(cw, ch, 24);
  auto map = [&](const Rect& r) {
    return std::array<std::int64_t, 4>{
        std::llround(static_cast<double>(r.x - root.x) * scale), std::llround(static_cast<double>(r.y - root.y) * scale),
        std::llround(static_cast<double>(r.right() - root.x) * scale) - 1,
        std::llround(static_cast<double>(r.bottom() - root.y) * scale) - 1};
  };
  const int glyph = canvas >= 512 ? 2 : 1;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto m = map(t.steps[i].patch);
    const auto shade = static_cast<std::uint8_t>(255 - std::min<std::size_t>(i * 8, 160));
    draw_rect(img, m[0], m[1], m[2], m[3], {shade, 64, 64});
    draw_number(img, m[0] + 2, m[1] + 2, i, glyph);
  }
  if (t.located) {
    const auto m = map(t.located->box);
    draw_rect(img, m[0], m[1], std::max(m[0], m[2]), std::max(m[1], m[3]), {0, 255, 0});
  }
  return img;
}

}  // namespace vstar
