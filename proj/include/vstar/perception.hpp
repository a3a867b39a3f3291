#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vstar/geometry.hpp"
#include "vstar/heatmap.hpp"

namespace vstar {

/// The target expression and the sub-image it is searched in.
struct TargetQuery {
  std::string name;
  Rect patch;

  void validate() const;
};

struct Detection {
  Rect box;
  double confidence = 0.0;
  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Output of one localization call: the best box (if any), its confidence,
/// every detection sorted by descending confidence, and the target cue.
struct LocalizationResult {
  std::optional<Rect> box;
  double confidence = 0.0;
  std::vector<Detection> detections;
  Heatmap cue;
};

/// The visual search model as seen by the search algorithm.
///
/// Implementations must tolerate concurrent calls from independent searches.
class PerceptionBackend {
 public:
  virtual ~PerceptionBackend() = default;

  /// "Please locate the <s> in the image."
  virtual LocalizationResult locate_target(const TargetQuery& q) const = 0;
  /// "What is the most likely location of the <s> in the image?"
  virtual std::string contextual_cue(const TargetQuery& q) const = 0;
  /// Heatmap for a free-text region expression over `patch`.
  virtual Heatmap locate_cue(const std::string& cue_text, const Rect& patch) const = 0;
};

struct PlantedTarget {
  std::string name;
  Rect box;
  double detectability = 1.0;
};

/// A synthetic stand-in for a real high-resolution image.
struct SyntheticScene {
  Rect extent{0, 0, 2048, 2048};
  std::vector<PlantedTarget> targets;
  std::map<std::string, Rect> context_regions;
  double cue_fidelity = 1.0;
  double noise_level = 0.0;
  /// Half-width of the uniform jitter added to detection confidences.
  double confidence_jitter = 0.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on boxes outside the extent or context regions
  /// that do not enclose their target.
  void validate() const;
};

struct OracleOptions {
  std::size_t grid = 32;
  double confidence = 0.9;
  double cue_amplitude = 6.0;
  /// Minimum target side relative to the patch's shorter side.
  double min_relative_size = 20.0 / 224.0;
};

inline constexpr std::string_view kRegionPrefix = "region:";
inline constexpr std::string_view kUnknownRegion = "region:unknown";

/// Answers from the planted ground truth, with seeded noise.
class OracleBackend : public PerceptionBackend {
 public:
  explicit OracleBackend(SyntheticScene scene, OracleOptions options = {});

  LocalizationResult locate_target(const TargetQuery& q) const override;
  std::string contextual_cue(const TargetQuery& q) const override;
  Heatmap locate_cue(const std::string& cue_text, const Rect& patch) const override;

  const SyntheticScene& scene() const { return scene_; }
  const OracleOptions& options() const { return options_; }

  /// Center containment plus the relative-size rule.
  bool detectable(const PlantedTarget& t, const Rect& patch) const;

  /// Detections only, without building a cue.
  std::vector<Detection> detect(const TargetQuery& q) const;

 private:
  Heatmap noise_heatmap(const Rect& patch, std::uint64_t stream) const;

  SyntheticScene scene_;
  OracleOptions options_;
};

struct FixationGuidance {
  double gamma = 0.9;
  /// Gaussian spread in pixels; <= 0 picks 1/16 of the longer image side.
  double sigma = 0.0;
  double amplitude = 6.0;
  /// Grid used to find the global maximum for normalization.
  std::size_t global_grid = 128;
};

/// Oracle detection with human-fixation guidance in place of model cues.
///
/// Both the target cue and the contextual heatmap are the fixation heatmap
/// restricted to the queried patch; the contextual text carries no information.
class FixationBackend : public PerceptionBackend {
 public:
  FixationBackend(SyntheticScene scene, FixationSequence fixations, FixationGuidance guidance = {},
                  OracleOptions options = {});

  LocalizationResult locate_target(const TargetQuery& q) const override;
  std::string contextual_cue(const TargetQuery& q) const override;
  Heatmap locate_cue(const std::string& cue_text, const Rect& patch) const override;

  /// Fixation heatmap over `patch`, on the same scale as the global map.
  Heatmap guidance(const Rect& patch) const;
  double sigma() const { return sigma_; }

 private:
  OracleBackend oracle_;
  FixationSequence fixations_;
  FixationGuidance params_;
  double sigma_ = 1.0;
  double scale_ = 0.0;
};

/// Builds a fixation-guided backend around a scene holding the ground truth.
std::unique_ptr<PerceptionBackend> fixation_backend(const SyntheticScene& scene, const FixationSequence& fixations,
                                                    double gamma, double sigma);

}  // namespace vstar
