#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace vstar {

/// Axis-aligned pixel rectangle in the root image frame.
///
/// Pixels covered are [x, x + w) x [y, y + h). Serialized in corner form
/// [x1, y1, x2, y2] with (x2, y2) = (x + w, y + h).
struct Rect {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t w = 1;
  std::int64_t h = 1;

  std::int64_t right() const { return x + w; }
  std::int64_t bottom() const { return y + h; }
  std::int64_t area() const { return w * h; }

  bool valid() const { return w >= 1 && h >= 1 && x >= 0 && y >= 0; }

  /// Pixel (px, py) lies inside.
  bool contains(std::int64_t px, std::int64_t py) const {
    return px >= x && px < right() && py >= y && py < bottom();
  }
  bool contains(const Rect& other) const {
    return other.x >= x && other.y >= y && other.right() <= right() && other.bottom() <= bottom();
  }
  bool intersects(const Rect& other) const {
    return other.x < right() && x < other.right() && other.y < bottom() && y < other.bottom();
  }

  /// Center pixel, rounding toward the top-left.
  std::int64_t center_x() const { return x + w / 2; }
  std::int64_t center_y() const { return y + h / 2; }

  std::array<std::int64_t, 4> corners() const { return {x, y, right(), bottom()}; }
  static Rect from_corners(std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2);

  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class Orientation { Landscape, Portrait, Balanced };

std::string_view to_string(Orientation o);

/// Landscape iff w > 2h, Portrait iff h > 2w, Balanced otherwise.
Orientation orientation(const Rect& r);

/// Splits a patch into four children in raster order: 2x2 for Balanced,
/// 1 row x 4 columns for Landscape, 4 rows x 1 column for Portrait.
///
/// Remainder pixels go to the earlier children. Returns an empty list when
/// any child's shorter side would fall below `min_side`.
std::vector<Rect> subdivide(const Rect& r, std::int64_t min_side);

/// Translates a box given in patch-local coordinates into the root frame.
/// Throws InvalidArgument when the box does not fit inside the patch.
Rect to_root_frame(const Rect& local_box, const Rect& patch);

/// Intersection, or an empty optional-like result signalled by w == 0.
Rect intersection(const Rect& a, const Rect& b);

/// Number of nodes in the complete subdivision tree rooted at `root`.
std::int64_t subdivision_tree_size(const Rect& root, std::int64_t min_side);

}  // namespace vstar
