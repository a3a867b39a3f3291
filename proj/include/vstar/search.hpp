#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vstar/error.hpp"
#include "vstar/geometry.hpp"
#include "vstar/perception.hpp"

namespace vstar {

struct SearchParams {
  double high_conf = 0.5;
  double low_conf = 0.3;
  double delta_base = 6.0;
  double delta_decay = 0.7;
  double delta_floor = 3.0;
  std::int64_t min_side = 224;

  /// Throws InvalidArgument when the ordering 0 < low <= high <= 1 or the
  /// threshold schedule bounds are violated.
  void validate() const;
  friend bool operator==(const SearchParams&, const SearchParams&) = default;
};

/// Cue prominence threshold at a subdivision level:
/// max(delta_floor, delta_base * delta_decay^level).
double cue_threshold(int level, const SearchParams& p);

enum class CueKind { TargetSpecific, Contextual, None };
std::string_view to_string(CueKind k);

struct ChildRecord {
  Rect patch;
  double priority = 0.0;
};

/// One popped sub-image.
struct SearchStep {
  Rect patch;
  int level = 0;
  double priority = 0.0;
  std::uint64_t insertion_index = 0;
  CueKind cue_kind = CueKind::None;
  double confidence = 0.0;
  std::vector<ChildRecord> children;
};

enum class OutcomeKind { Found, BestEffort, NotFound };
std::string_view to_string(OutcomeKind k);

struct SearchCounters {
  std::uint64_t locate_calls = 0;
  std::uint64_t cue_calls = 0;
};

struct SearchTrace {
  std::string target;
  std::string strategy = "guided";
  SearchParams params;
  std::vector<SearchStep> steps;
  OutcomeKind outcome = OutcomeKind::NotFound;
  /// Box and confidence behind Found / BestEffort.
  std::optional<Detection> located;
  /// Step whose patch produced `located`.
  std::optional<std::size_t> locating_step;
  /// Every box above the high threshold when the root itself succeeded.
  std::vector<Detection> root_detections;
  SearchCounters counters;
};

struct SearchOutcome {
  SearchTrace trace;
  std::optional<Detection> located;
};

/// Backend failure mid-search; carries the steps completed so far.
class SearchAborted : public TransportError {
 public:
  SearchAborted(const std::string& what, SearchTrace partial)
      : TransportError(what), partial_(std::move(partial)) {}
  const SearchTrace& partial() const { return partial_; }

 private:
  SearchTrace partial_;
};

/// Switches for cue ablations.
struct CuePolicy {
  /// false: the target-specific heatmap is replaced by zeros, so every
  /// expansion falls back to the contextual cue.
  bool target_cue = true;
  /// false: when the target cue is not prominent, a flat heatmap is used
  /// instead of asking for a contextual cue.
  bool contextual_cue = true;
};

/// LLM-guided best-first search over the patch hierarchy rooted at `root`.
SearchOutcome vstar_search(const PerceptionBackend& backend, const Rect& root, std::string_view target,
                           const SearchParams& p, const CuePolicy& policy = {});

enum class BaselineStrategy { RandomBFS, RandomDFS, SequentialBFS, SequentialDFS };
std::string_view to_string(BaselineStrategy s);

/// Uninformed search with the same localization and thresholds; only the
/// expansion order differs. Sequential visits children in reverse raster
/// order, Random shuffles them with `seed`.
SearchOutcome baseline_search(BaselineStrategy strategy, const PerceptionBackend& backend, const Rect& root,
                              std::string_view target, const SearchParams& p, std::uint64_t seed);

struct SearchLength {
  std::int64_t steps = 0;
  /// Root-level successes do not count towards benchmark averages.
  bool excluded = false;
};

/// Number of patches popped after the root up to the locating one.
/// Throws InvalidArgument for NotFound traces.
SearchLength search_length(const SearchTrace& t);

}  // namespace vstar
