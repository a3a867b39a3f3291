#include "vstar/perception.hpp"

#include <algorithm>
#include <cmath>

#include "vstar/error.hpp"
#include "vstar/rng.hpp"

namespace vstar {

namespace {

constexpr std::uint64_t kTargetNoise = 1;
constexpr std::uint64_t kContextNoise = 2;
constexpr std::uint64_t kJitter = 3;

std::uint64_t patch_seed(std::uint64_t scene_seed, const Rect& patch, std::uint64_t stream) {
  return derive_seed({scene_seed, static_cast<std::uint64_t>(patch.x), static_cast<std::uint64_t>(patch.y),
                      static_cast<std::uint64_t>(patch.w), static_cast<std::uint64_t>(patch.h), stream});
}

}  // namespace

void TargetQuery::validate() const {
  if (name.empty()) throw InvalidArgument("target query: empty target name");
  if (!patch.valid()) throw InvalidArgument("target query: invalid patch");
}

void SyntheticScene::validate() const {
  if (!extent.valid()) throw InvalidArgument("scene: invalid extent");
  if (!(cue_fidelity >= 0.0 && cue_fidelity <= 1.0)) throw InvalidArgument("scene: cue_fidelity outside [0, 1]");
  if (!(noise_level >= 0.0)) throw InvalidArgument("scene: negative noise_level");
  if (!(confidence_jitter >= 0.0)) throw InvalidArgument("scene: negative confidence_jitter");
  for (const auto& t : targets) {
    if (t.name.empty()) throw InvalidArgument("scene: target without a name");
    if (!t.box.valid() || !extent.contains(t.box)) throw InvalidArgument("scene: target box outside extent");
    if (!(t.detectability >= 0.0)) throw InvalidArgument("scene: negative detectability");
  }
  for (const auto& [name, region] : context_regions) {
    if (!region.valid()) throw InvalidArgument("scene: invalid context region for " + name);
    for (const auto& t : targets)
      if (t.name == name && !region.contains(t.box))
        throw InvalidArgument("scene: context region does not enclose target " + name);
  }
}

OracleBackend::OracleBackend(SyntheticScene scene, OracleOptions options)
    : scene_(std::move(scene)), options_(options) {
  scene_.validate();
  if (options_.grid == 0) throw InvalidArgument("oracle: grid must be >= 1");
}

bool OracleBackend::detectable(const PlantedTarget& t, const Rect& patch) const {
  if (!patch.contains(t.box.center_x(), t.box.center_y())) return false;
  const double shorter_target = static_cast<double>(std::min(t.box.w, t.box.h));
  const double shorter_patch = static_cast<double>(std::min(patch.w, patch.h));
  return shorter_target >= options_.min_relative_size * shorter_patch;
}

std::vector<Detection> OracleBackend::detect(const TargetQuery& q) const {
  q.validate();
  std::vector<Detection> out;
  for (std::size_t i = 0; i < scene_.targets.size(); ++i) {
    const auto& t = scene_.targets[i];
    if (t.name != q.name || !detectable(t, q.patch)) continue;
    double conf = options_.confidence * t.detectability;
    if (scene_.confidence_jitter > 0.0) {
      Rng rng(derive_seed({patch_seed(scene_.seed, q.patch, kJitter), i}));
      conf += scene_.confidence_jitter * (2.0 * rng.uniform01() - 1.0);
    }
    conf = std::clamp(conf, 0.0, 1.0);
    if (conf <= 0.0) continue;
    out.push_back({intersection(t.box, scene_.extent), conf});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Detection& a, const Detection& b) { return a.confidence > b.confidence; });
  return out;
}

Heatmap OracleBackend::noise_heatmap(const Rect& patch, std::uint64_t stream) const {
  Heatmap h = Heatmap::zeros(options_.grid, options_.grid, patch);
  if (scene_.noise_level > 0.0) {
    Rng rng(patch_seed(scene_.seed, patch, stream));
    for (double& v : h.mutable_values()) v = scene_.noise_level * rng.uniform01();
  }
  return h;
}

LocalizationResult OracleBackend::locate_target(const TargetQuery& q) const {
  LocalizationResult r{std::nullopt, 0.0, detect(q), noise_heatmap(q.patch, kTargetNoise)};
  if (!r.detections.empty()) {
    r.box = r.detections.front().box;
    r.confidence = r.detections.front().confidence;
  }
  const double amplitude = options_.cue_amplitude * scene_.cue_fidelity;
  if (amplitude > 0.0) {
    for (const auto& t : scene_.targets) {
      if (t.name != q.name || !q.patch.contains(t.box.center_x(), t.box.center_y())) continue;
      const double sigma = static_cast<double>(std::max(t.box.w, t.box.h));
      add_gaussian(r.cue, static_cast<double>(t.box.center_x()), static_cast<double>(t.box.center_y()), sigma,
                   amplitude, SampleMode::CellFootprint);
    }
  }
  return r;
}

std::string OracleBackend::contextual_cue(const TargetQuery& q) const {
  q.validate();
  if (scene_.context_regions.contains(q.name)) return std::string(kRegionPrefix) + q.name;
  return std::string(kUnknownRegion);
}

Heatmap OracleBackend::locate_cue(const std::string& cue_text, const Rect& patch) const {
  if (!patch.valid()) throw InvalidArgument("locate_cue: invalid patch");
  Heatmap h = noise_heatmap(patch, kContextNoise);
  if (!cue_text.starts_with(kRegionPrefix)) return h;
  const auto it = scene_.context_regions.find(cue_text.substr(kRegionPrefix.size()));
  const double amplitude = options_.cue_amplitude * scene_.cue_fidelity;
  if (it == scene_.context_regions.end() || amplitude <= 0.0) return h;
  const Rect& region = it->second;
  const double sigma = static_cast<double>(std::max(region.w, region.h)) / 2.0;
  add_gaussian(h, static_cast<double>(region.center_x()), static_cast<double>(region.center_y()), sigma, amplitude,
               SampleMode::CellFootprint);
  return h;
}

FixationBackend::FixationBackend(SyntheticScene scene, FixationSequence fixations, FixationGuidance guidance,
                                 OracleOptions options)
    : oracle_(std::move(scene), options), fixations_(std::move(fixations)), params_(guidance) {
  fixations_.validate();
  if (!oracle_.scene().extent.contains(fixations_.image_extent))
    throw InvalidArgument("fixation backend: fixation extent exceeds scene extent");
  sigma_ = params_.sigma > 0.0 ? params_.sigma : default_fixation_sigma(fixations_.image_extent);
  if (!fixations_.points.empty()) {
    const Heatmap global = fixation_density(fixations_, params_.gamma, sigma_, fixations_.image_extent,
                                            params_.global_grid, params_.global_grid);
    const double peak = max_value(global);
    scale_ = peak > 0.0 ? params_.amplitude / peak : 0.0;
  } else if (!(params_.gamma > 0.0 && params_.gamma < 1.0)) {
    throw InvalidArgument("fixation heatmap: gamma must lie in (0, 1)");
  }
}

Heatmap FixationBackend::guidance(const Rect& patch) const {
  const std::size_t grid = oracle_.options().grid;
  if (fixations_.points.empty()) return Heatmap::zeros(grid, grid, patch);
  return fixation_density(fixations_, params_.gamma, sigma_, patch, grid, grid, scale_);
}

LocalizationResult FixationBackend::locate_target(const TargetQuery& q) const {
  LocalizationResult r{std::nullopt, 0.0, oracle_.detect(q), guidance(q.patch)};
  if (!r.detections.empty()) {
    r.box = r.detections.front().box;
    r.confidence = r.detections.front().confidence;
  }
  return r;
}

std::string FixationBackend::contextual_cue(const TargetQuery& q) const {
  q.validate();
  return "fixation";
}

Heatmap FixationBackend::locate_cue(const std::string&, const Rect& patch) const { return guidance(patch); }

std::unique_ptr<PerceptionBackend> fixation_backend(const SyntheticScene& scene, const FixationSequence& fixations,
                                                    double gamma, double sigma) {
  FixationGuidance g;
  g.gamma = gamma;
  g.sigma = sigma;
  return std::make_unique<FixationBackend>(scene, fixations, g);
}

}  // namespace vstar
