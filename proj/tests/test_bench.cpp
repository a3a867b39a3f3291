#include <boost/math/distributions/chi_squared.hpp>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "vstar/bench.hpp"
#include "vstar/error.hpp"
#include "vstar/stats.hpp"

using namespace vstar;

namespace {

ExperimentConfig small(std::size_t n) {
  ExperimentConfig cfg;
  cfg.n_scenes = n;
  return cfg;
}

std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(VSTAR_TEST_TMP);
  return std::string(VSTAR_TEST_TMP) + "/" + name;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("scene generation is deterministic") {
  const ExperimentConfig cfg;
  const auto a = generate_scene(123, cfg), b = generate_scene(123, cfg);
  CHECK(scene_to_json(a) == scene_to_json(b));
  CHECK(scene_to_json(a) != scene_to_json(generate_scene(124, cfg)));
}

TEST_CASE("degenerate size range pins the target size") {
  ExperimentConfig cfg;
  cfg.target_min = cfg.target_max = 60;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Rect box = generate_scene(s, cfg).targets.front().box;
    CHECK(box.w == 60);
    CHECK(box.h == 60);
  }
}

TEST_CASE("context region encloses the target and its root child") {
  const ExperimentConfig cfg;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const SyntheticScene scene = generate_scene(s, cfg);
    const Rect& ctx = scene.context_regions.at("target");
    CHECK(ctx.contains(scene.targets.front().box));
    CHECK(scene.extent.contains(ctx));
  }
}

TEST_CASE("target centers are uniform over a 4x4 grid") {
  const ExperimentConfig cfg;
  std::vector<double> counts(16, 0.0);
  const int n = 1000;
  for (int s = 0; s < n; ++s) {
    const Rect b = generate_scene(scene_seed(cfg, s), cfg).targets.front().box;
    // Centers can only fall where a full box fits, so bin over that range.
    const double lo = 20.0, hi = 2048.0 - 20.0;
    const int cx = std::min(3, int((b.center_x() - lo) / ((hi - lo) / 4)));
    const int cy = std::min(3, int((b.center_y() - lo) / ((hi - lo) / 4)));
    counts[cy * 4 + cx] += 1.0;
  }
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - n / 16.0) * (c - n / 16.0) / (n / 16.0);
  const boost::math::chi_squared dist(15);
  CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 0.01);
}

TEST_CASE("config JSON round trip and validation") {
  ExperimentConfig cfg = small(7);
  cfg.cue_fidelity = 0.5;
  cfg.strategies = {Strategy::Guided, Strategy::SequentialDFS};
  cfg.params.min_side = 300;
  const Json j = config_to_json(cfg);
  CHECK(config_to_json(config_from_json(j)) == j);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"strategies":["teleport"]})")), DataError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"target_size_range":[100,50]})")), DataError);
  CHECK_THROWS_AS(config_from_json(Json::parse(R"({"n_scenes":"many"})")), DataError);
}

TEST_CASE("guided beats the uninformed baselines with ideal cues") {
  const ResultTable t = run_experiment(small(60));
  const double guided = t.find("guided")->mean_search_length;
  CHECK(guided <= t.find("sequential_bfs")->mean_search_length);
  CHECK(guided <= t.find("random_bfs")->mean_search_length);
  CHECK(t.find("sequential_dfs")->mean_search_length > t.find("sequential_bfs")->mean_search_length);
  for (const auto& s : t.summaries) CHECK(s.success_rate == 1.0);
}

TEST_CASE("uninformative cues make guided search indistinguishable from random") {
  ExperimentConfig cfg = small(200);
  cfg.cue_fidelity = 0.0;
  cfg.strategies = {Strategy::Guided, Strategy::RandomBFS};
  const ResultTable t = run_experiment(cfg);
  const auto pair = paired_lengths(t, "guided", "random_bfs");
  CHECK(paired_bootstrap(pair.a, pair.b, Alternative::TwoSided).p_value > 0.01);
}

TEST_CASE("sequential DFS is longer on a deep family") {
  ExperimentConfig cfg = small(40);
  cfg.extent = {0, 0, 4096, 4096};
  cfg.strategies = {Strategy::SequentialDFS, Strategy::SequentialBFS};
  const ResultTable t = run_experiment(cfg);
  const auto pair = paired_lengths(t, "sequential_bfs", "sequential_dfs");
  CHECK(mean(pair.b) > mean(pair.a));
}

TEST_CASE("full guided search is no worse than either ablation") {
  const ResultTable t = ablate_cues(small(60));
  REQUIRE(t.summaries.size() == 3);
  const double full = t.find("guided")->mean_search_length;
  CHECK(full <= t.find("guided_no_target_cue")->mean_search_length);
  CHECK(full <= t.find("guided_no_context_cue")->mean_search_length);
}

TEST_CASE("results are reproducible and independent of worker count") {
  ExperimentConfig cfg = small(12);
  const Json a = table_to_json(run_experiment(cfg));
  cfg.workers = 3;
  CHECK(table_to_json(run_experiment(cfg)) == a);
  CHECK(table_to_markdown(run_experiment(cfg)).starts_with("<!-- config: "));
}

TEST_CASE("trace sink sees one trace per strategy and scene") {
  std::size_t calls = 0;
  run_experiment(small(3), [&](std::size_t, const std::string&, const SearchTrace&) { ++calls; });
  CHECK(calls == 3 * 7);
}

TEST_CASE("synthetic fixation trails end on the target") {
  const auto records = synthesize_fixation_records(50, 9, ExperimentConfig{});
  REQUIRE(records.size() == 50);
  for (const auto& r : records) {
    CHECK(r.fixations.points.size() >= 6);
    CHECK(r.fixations.points.size() <= 10);
    const auto& last = r.fixations.points.back();
    CHECK(last.x == double(r.target_box.center_x()));
    CHECK(last.y == double(r.target_box.center_y()));
    r.fixations.validate();
  }
}

TEST_CASE("fixation records round trip and malformed lines are skipped") {
  const auto records = synthesize_fixation_records(5, 1, ExperimentConfig{});
  const std::string path = tmp_path("fixations.jsonl");
  write_fixation_records(path, records);
  {
    std::ofstream out(path, std::ios::app);
    out << "{not json\n";
    out << R"({"image_id":"x","extent":[0,0,10,10],"points":[[50,50]],"target_box":[0,0,5,5]})" << "\n";
  }
  std::size_t skipped = 0;
  const auto back = read_fixation_records(path, skipped);
  CHECK(skipped == 2);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(fixation_record_to_json(back[i]) == fixation_record_to_json(records[i]));
  CHECK_THROWS_AS(read_fixation_records(tmp_path("missing.jsonl"), skipped), DataError);
}

TEST_CASE("fixation replay favours gaze guidance") {
  const auto records = synthesize_fixation_records(60, 3, ExperimentConfig{});
  const ResultTable t = replay_records(records, ReplayConfig{});
  REQUIRE(t.find("fixation_g0.9") != nullptr);
  CHECK(t.find("fixation_g0.9")->mean_search_length <= t.find("sequential_bfs")->mean_search_length);
  CHECK(t.find("fixation_g0.8")->mean_search_length <= t.find("random_bfs")->mean_search_length);
}

TEST_CASE("empty fixation dataset gives an empty table with a notice") {
  const std::string path = tmp_path("empty.jsonl");
  std::ofstream(path).close();
  const ResultTable t = replay_fixations(path, ReplayConfig{});
  CHECK(t.rows.empty());
  CHECK(t.notice == "No fixation records to replay.");
  for (const auto& s : t.summaries) CHECK(s.n_included == 0);
}

}
