#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vstar/heatmap.hpp"
#include "vstar/json_io.hpp"
#include "vstar/perception.hpp"
#include "vstar/search.hpp"

namespace vstar {

enum class Strategy {
  Guided,
  GuidedNoTargetCue,
  GuidedNoContextCue,
  GuidedNoCues,
  RandomBFS,
  RandomDFS,
  SequentialBFS,
  SequentialDFS,
};

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view name);
bool is_random(Strategy s);

/// Runs one search of the given strategy. `seed` only matters for the
/// random baselines.
SearchOutcome run_strategy(Strategy s, const PerceptionBackend& backend, const Rect& root, std::string_view target,
                           const SearchParams& p, std::uint64_t seed);

struct ExperimentConfig {
  std::size_t n_scenes = 200;
  Rect extent{0, 0, 2048, 2048};
  /// Target width and height are drawn independently from [min, max].
  std::int64_t target_min = 40;
  std::int64_t target_max = 120;
  double cue_fidelity = 1.0;
  double noise_level = 0.0;
  double confidence_jitter = 0.0;
  std::vector<Strategy> strategies = {Strategy::Guided,          Strategy::GuidedNoTargetCue,
                                      Strategy::GuidedNoContextCue, Strategy::RandomBFS,
                                      Strategy::RandomDFS,       Strategy::SequentialBFS,
                                      Strategy::SequentialDFS};
  /// Seeds for the random baselines; their per-scene length is the mean
  /// over these seeds.
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  /// Base seed from which every scene seed is derived.
  std::uint64_t scene_seed = 0;
  SearchParams params;
  OracleOptions oracle;
  std::size_t workers = 1;

  void validate() const;
};

Json config_to_json(const ExperimentConfig& c);
/// Missing fields keep their defaults.
ExperimentConfig config_from_json(const Json& j);

std::uint64_t scene_seed(const ExperimentConfig& cfg, std::size_t index);

/// One target named "target" of random size at a random position fully
/// inside the extent; its context region is the root child holding the
/// target center, grown by 10% and clipped to the extent.
SyntheticScene generate_scene(std::uint64_t seed, const ExperimentConfig& cfg);

struct StrategySummary {
  std::string strategy;
  double mean_search_length = 0.0;
  double success_rate = 0.0;
  std::size_t n_included = 0;
  std::size_t n_scenes = 0;
  std::size_t n_errors = 0;
};

struct SceneCell {
  std::string strategy;
  std::string outcome;
  std::optional<double> length;
  bool excluded = false;
  std::string error;
};

struct SceneRow {
  std::size_t index = 0;
  std::string id;
  std::uint64_t seed = 0;
  Rect target;
  std::vector<SceneCell> cells;

  const SceneCell* find(std::string_view strategy) const;
};

struct ResultTable {
  std::string title;
  Json config;
  std::vector<StrategySummary> summaries;
  std::vector<SceneRow> rows;
  std::size_t skipped_records = 0;
  std::string notice;

  const StrategySummary* find(std::string_view strategy) const;
};

/// Per-scene lengths of two strategies over the scenes included for both.
struct PairedLengths {
  std::vector<double> a;
  std::vector<double> b;
};
PairedLengths paired_lengths(const ResultTable& t, std::string_view a, std::string_view b);

Json table_to_json(const ResultTable& t);
std::string table_to_markdown(const ResultTable& t);

/// Called for every finished search: (scene index, strategy name, trace).
/// Random strategies report their first seed only. May be called from
/// worker threads, one scene at a time per thread.
using TraceSink = std::function<void(std::size_t, const std::string&, const SearchTrace&)>;

ResultTable run_experiment(const ExperimentConfig& cfg, const TraceSink& sink = {});

/// Full guided search next to its two cue ablations.
ResultTable ablate_cues(ExperimentConfig cfg, const TraceSink& sink = {});

struct FixationRecord {
  std::string image_id;
  std::string target = "target";
  FixationSequence fixations;
  Rect target_box;
};

Json fixation_record_to_json(const FixationRecord& r);
/// Throws DataError for malformed records.
FixationRecord fixation_record_from_json(const Json& j);

/// Reads JSON lines; malformed lines are skipped and counted.
std::vector<FixationRecord> read_fixation_records(const std::string& path, std::size_t& skipped);
void write_fixation_records(const std::string& path, const std::vector<FixationRecord>& records);

/// Synthetic gaze trails: a start near the image center, a few saccades
/// toward the target, then a cluster of fixations ending on the target.
std::vector<FixationRecord> synthesize_fixation_records(std::size_t n, std::uint64_t seed,
                                                        const ExperimentConfig& cfg);

struct ReplayConfig {
  std::vector<double> gammas = {0.9, 0.8};
  /// <= 0 selects 1/16 of the longer image side.
  double sigma = 0.0;
  double amplitude = 6.0;
  SearchParams params;
  OracleOptions oracle;
  std::vector<BaselineStrategy> baselines = {BaselineStrategy::RandomBFS, BaselineStrategy::RandomDFS,
                                             BaselineStrategy::SequentialBFS, BaselineStrategy::SequentialDFS};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  std::size_t workers = 1;
};

std::string fixation_strategy_name(double gamma);

ResultTable replay_records(const std::vector<FixationRecord>& records, const ReplayConfig& cfg,
                           std::size_t skipped = 0, const TraceSink& sink = {});
ResultTable replay_fixations(const std::string& dataset_path, const ReplayConfig& cfg, const TraceSink& sink = {});

}  // namespace vstar
