#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vstar/geometry.hpp"

namespace vstar {

/// Row-major grid of finite cue scores (logit scale) covering `frame`.
///
/// Cell (c, r) spans frame.w / width by frame.h / height pixels; its center
/// is at frame.x + (c + 0.5) * cell_w, frame.y + (r + 0.5) * cell_h.
class Heatmap {
 public:
  /// Throws InvalidArgument on empty grids, size mismatch or non-finite values.
  Heatmap(std::size_t width, std::size_t height, Rect frame, std::vector<double> values);

  static Heatmap zeros(std::size_t width, std::size_t height, Rect frame);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  const Rect& frame() const { return frame_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  double at(std::size_t col, std::size_t row) const { return values_[row * width_ + col]; }

  double cell_width() const { return static_cast<double>(frame_.w) / static_cast<double>(width_); }
  double cell_height() const { return static_cast<double>(frame_.h) / static_cast<double>(height_); }
  double cell_center_x(std::size_t col) const;
  double cell_center_y(std::size_t row) const;

  friend bool operator==(const Heatmap&, const Heatmap&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  Rect frame_;
  std::vector<double> values_;
};

double max_value(const Heatmap& h);

/// Maximum over cells whose centers lie inside `patch`; when no center does,
/// the value of the cell nearest the patch center. Throws InvalidArgument
/// when `patch` is not contained in the heatmap frame.
double patch_priority(const Heatmap& h, const Rect& patch);

/// How a Gaussian is sampled onto the grid.
enum class SampleMode {
  /// Distance measured to each cell center.
  CellCenter,
  /// Distance measured to the nearest pixel of each cell, so the cell that
  /// contains the source pixel receives the full amplitude.
  CellFootprint,
};

/// Adds amplitude * exp(-d^2 / (2 sigma^2)) to every cell.
void add_gaussian(Heatmap& h, double cx, double cy, double sigma, double amplitude,
                  SampleMode mode = SampleMode::CellCenter);

struct FixationPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const FixationPoint&, const FixationPoint&) = default;
};

/// Recorded gaze points in temporal order, in root-frame pixels.
struct FixationSequence {
  std::vector<FixationPoint> points;
  Rect image_extent;

  /// Throws InvalidArgument when a point falls outside the extent.
  void validate() const;
};

/// Unnormalized density sum_i gamma^i * exp(-d_i^2 / (2 sigma^2)), i from 0,
/// sampled at the cell centers of a width x height grid over `frame`, then
/// multiplied by `scale`.
Heatmap fixation_density(const FixationSequence& f, double gamma, double sigma, const Rect& frame,
                         std::size_t width, std::size_t height, double scale = 1.0);

/// Fixation density over the whole image, rescaled so its maximum equals
/// `amplitude` (all zeros for an empty sequence). Throws InvalidArgument
/// unless 0 < gamma < 1 and sigma > 0.
Heatmap fixations_to_heatmap(const FixationSequence& f, double gamma, double sigma, std::size_t width,
                             std::size_t height, double amplitude = 6.0);

/// Default Gaussian spread for fixation heatmaps: 1/16 of the longer side.
double default_fixation_sigma(const Rect& extent);

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;
};

/// Linear min -> 0, max -> 255 mapping; a constant heatmap renders black.
GrayImage render_heatmap(const Heatmap& h);

}  // namespace vstar
