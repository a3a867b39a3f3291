#include "vstar/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vstar/error.hpp"
#include "vstar/kernels.hpp"

namespace vstar {

namespace {

struct Span1D {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

// Cells along one axis whose centers fall in [lo, hi).
Span1D covered_cells(double origin, double cell, std::size_t count, double lo, double hi) {
  Span1D s{count, count};
  for (std::size_t i = 0; i < count; ++i) {
    const double c = origin + (static_cast<double>(i) + 0.5) * cell;
    if (c >= lo && c < hi) {
      if (s.begin == count) s.begin = i;
      s.end = i + 1;
    }
  }
  if (s.begin == count) s.end = count;
  return s;
}

std::size_t nearest_cell(double origin, double cell, std::size_t count, double p) {
  const double idx = std::floor((p - origin) / cell);
  if (idx < 0.0) return 0;
  if (idx >= static_cast<double>(count)) return count - 1;
  return static_cast<std::size_t>(idx);
}

// Squared distance from `p` to each cell along one axis.
std::vector<double> axis_distances_sq(double origin_px, std::int64_t frame_origin, double cell, std::size_t count,
                                      double p, SampleMode mode) {
  std::vector<double> d(count);
  for (std::size_t i = 0; i < count; ++i) {
    double dist = 0.0;
    const double center = origin_px + (static_cast<double>(i) + 0.5) * cell;
    if (mode == SampleMode::CellFootprint) {
      const auto p0 = frame_origin + static_cast<std::int64_t>(std::floor(static_cast<double>(i) * cell));
      const auto p1 = frame_origin + static_cast<std::int64_t>(std::floor(static_cast<double>(i + 1) * cell));
      if (p1 <= p0) {
        dist = std::abs(center - p);
      } else if (p < static_cast<double>(p0)) {
        dist = static_cast<double>(p0) - p;
      } else if (p > static_cast<double>(p1 - 1)) {
        dist = p - static_cast<double>(p1 - 1);
      }
    } else {
      dist = center - p;
    }
    d[i] = dist * dist;
  }
  return d;
}

void check_fixation_params(double gamma, double sigma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("fixation heatmap: gamma must lie in (0, 1)");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("fixation heatmap: sigma must be > 0");
}

}  // namespace

Heatmap::Heatmap(std::size_t width, std::size_t height, Rect frame, std::vector<double> values)
    : width_(width), height_(height), frame_(frame), values_(std::move(values)) {
  if (width_ == 0 || height_ == 0) throw InvalidArgument("heatmap: empty grid");
  if (values_.size() != width_ * height_) throw InvalidArgument("heatmap: value count does not match grid");
  if (!frame_.valid()) throw InvalidArgument("heatmap: invalid frame");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("heatmap: non-finite value");
}

Heatmap Heatmap::zeros(std::size_t width, std::size_t height, Rect frame) {
  return Heatmap(width, height, frame, std::vector<double>(width * height, 0.0));
}

double Heatmap::cell_center_x(std::size_t col) const {
  return static_cast<double>(frame_.x) + (static_cast<double>(col) + 0.5) * cell_width();
}

double Heatmap::cell_center_y(std::size_t row) const {
  return static_cast<double>(frame_.y) + (static_cast<double>(row) + 0.5) * cell_height();
}

double max_value(const Heatmap& h) {
  if (h.values().empty()) throw InvalidArgument("max_value: empty heatmap");
  return kernels::max(h.values());
}

double patch_priority(const Heatmap& h, const Rect& patch) {
  if (!h.frame().contains(patch)) throw InvalidArgument("patch_priority: patch outside heatmap frame");
  const Rect& f = h.frame();
  const Span1D cols = covered_cells(static_cast<double>(f.x), h.cell_width(), h.width(),
                                    static_cast<double>(patch.x), static_cast<double>(patch.right()));
  const Span1D rows = covered_cells(static_cast<double>(f.y), h.cell_height(), h.height(),
                                    static_cast<double>(patch.y), static_cast<double>(patch.bottom()));
  if (cols.begin == cols.end || rows.begin == rows.end) {
    const double px = static_cast<double>(patch.x) + static_cast<double>(patch.w) / 2.0;
    const double py = static_cast<double>(patch.y) + static_cast<double>(patch.h) / 2.0;
    return h.at(nearest_cell(static_cast<double>(f.x), h.cell_width(), h.width(), px),
                nearest_cell(static_cast<double>(f.y), h.cell_height(), h.height(), py));
  }
  const auto values = h.values();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = rows.begin; r < rows.end; ++r) {
    const double m = kernels::max(values.subspan(r * h.width() + cols.begin, cols.end - cols.begin));
    best = m > best ? m : best;
  }
  return best;
}

void add_gaussian(Heatmap& h, double cx, double cy, double sigma, double amplitude, SampleMode mode) {
  if (!(sigma > 0.0)) throw InvalidArgument("add_gaussian: sigma must be > 0");
  const Rect& f = h.frame();
  const double inv = 1.0 / (2.0 * sigma * sigma);
  auto gx = axis_distances_sq(static_cast<double>(f.x), f.x, h.cell_width(), h.width(), cx, mode);
  auto gy = axis_distances_sq(static_cast<double>(f.y), f.y, h.cell_height(), h.height(), cy, mode);
  for (double& v : gx) v = std::exp(-v * inv);
  for (double& v : gy) v = std::exp(-v * inv);
  kernels::add_outer(h.mutable_values(), h.width(), h.height(), gx, gy, amplitude);
}

void FixationSequence::validate() const {
  if (!image_extent.valid()) throw InvalidArgument("fixations: invalid image extent");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < static_cast<double>(image_extent.x) ||
        p.y < static_cast<double>(image_extent.y) || p.x >= static_cast<double>(image_extent.right()) ||
        p.y >= static_cast<double>(image_extent.bottom())) {
      throw InvalidArgument("fixations: point outside image extent");
    }
  }
}

Heatmap fixation_density(const FixationSequence& f, double gamma, double sigma, const Rect& frame,
                         std::size_t width, std::size_t height, double scale) {
  check_fixation_params(gamma, sigma);
  Heatmap h = Heatmap::zeros(width, height, frame);
  double weight = 1.0;
  for (const auto& p : f.points) {
    add_gaussian(h, p.x, p.y, sigma, weight, SampleMode::CellCenter);
    weight *= gamma;
  }
  if (scale != 1.0) kernels::scale(h.mutable_values(), scale);
  return h;
}

Heatmap fixations_to_heatmap(const FixationSequence& f, double gamma, double sigma, std::size_t width,
                             std::size_t height, double amplitude) {
  f.validate();
  Heatmap h = fixation_density(f, gamma, sigma, f.image_extent, width, height);
  if (f.points.empty()) return h;
  const double peak = max_value(h);
  if (peak > 0.0) kernels::scale(h.mutable_values(), amplitude / peak);
  return h;
}

double default_fixation_sigma(const Rect& extent) {
  return static_cast<double>(std::max(extent.w, extent.h)) / 16.0;
}

GrayImage render_heatmap(const Heatmap& h) {
  GrayImage img{h.width(), h.height(), std::vector<std::uint8_t>(h.values().size(), 0)};
  double lo = 0.0;
  double hi = 0.0;
  kernels::minmax(h.values(), lo, hi);
  if (!(hi > lo)) return img;
  kernels::quantize(h.values(), lo, 255.0 / (hi - lo), img.pixels);
  return img;
}

}  // namespace vstar
