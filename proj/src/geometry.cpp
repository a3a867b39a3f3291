#include "vstar/geometry.hpp"

#include <algorithm>
#include <string>

#include "vstar/error.hpp"

namespace vstar {

namespace {

// Splits `length` into `parts` integer pieces; earlier pieces take the remainder.
std::array<std::int64_t, 4> split_lengths(std::int64_t length, int parts) {
  std::array<std::int64_t, 4> out{};
  const std::int64_t base = length / parts;
  const std::int64_t extra = length % parts;
  for (int i = 0; i < parts; ++i) out[i] = base + (i < extra ? 1 : 0);
  return out;
}

}  // namespace

Rect Rect::from_corners(std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2) {
  return Rect{x1, y1, x2 - x1, y2 - y1};
}

std::string_view to_string(Orientation o) {
  switch (o) {
    case Orientation::Landscape: return "landscape";
    case Orientation::Portrait: return "portrait";
    case Orientation::Balanced: return "balanced";
  }
  return "balanced";
}

Orientation orientation(const Rect& r) {
  if (r.w > 2 * r.h) return Orientation::Landscape;
  if (r.h > 2 * r.w) return Orientation::Portrait;
  return Orientation::Balanced;
}

std::vector<Rect> subdivide(const Rect& r, std::int64_t min_side) {
  if (!r.valid()) throw InvalidArgument("subdivide: invalid rect");
  if (min_side < 1) throw InvalidArgument("subdivide: min_side must be >= 1");

  int cols = 2;
  int rows = 2;
  switch (orientation(r)) {
    case Orientation::Landscape: cols = 4; rows = 1; break;
    case Orientation::Portrait: cols = 1; rows = 4; break;
    case Orientation::Balanced: break;
  }

  const auto widths = split_lengths(r.w, cols);
  const auto heights = split_lengths(r.h, rows);
  // The smallest child is always the last one in each direction.
  if (std::min(widths[cols - 1], heights[rows - 1]) < min_side) return {};

  std::vector<Rect> children;
  children.reserve(4);
  std::int64_t y = r.y;
  for (int row = 0; row < rows; ++row) {
    std::int64_t x = r.x;
    for (int col = 0; col < cols; ++col) {
      children.push_back(Rect{x, y, widths[col], heights[row]});
      x += widths[col];
    }
    y += heights[row];
  }
  return children;
}

Rect to_root_frame(const Rect& local_box, const Rect& patch) {
  if (local_box.w < 1 || local_box.h < 1 || local_box.x < 0 || local_box.y < 0 ||
      local_box.right() > patch.w || local_box.bottom() > patch.h) {
    throw InvalidArgument("to_root_frame: box exceeds patch extents");
  }
  return Rect{local_box.x + patch.x, local_box.y + patch.y, local_box.w, local_box.h};
}

Rect intersection(const Rect& a, const Rect& b) {
  const std::int64_t x1 = std::max(a.x, b.x);
  const std::int64_t y1 = std::max(a.y, b.y);
  const std::int64_t x2 = std::min(a.right(), b.right());
  const std::int64_t y2 = std::min(a.bottom(), b.bottom());
  if (x2 <= x1 || y2 <= y1) return Rect{x1, y1, 0, 0};
  return Rect::from_corners(x1, y1, x2, y2);
}

std::int64_t subdivision_tree_size(const Rect& root, std::int64_t min_side) {
  std::int64_t total = 1;
  for (const Rect& child : subdivide(root, min_side)) total += subdivision_tree_size(child, min_side);
  return total;
}

}  // namespace vstar
