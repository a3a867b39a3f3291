#include "vstar/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "vstar/error.hpp"
#include "vstar/rng.hpp"
#include "vstar/trace_io.hpp"

namespace vstar {

namespace {

constexpr Strategy kAllStrategies[] = {Strategy::Guided,        Strategy::GuidedNoTargetCue, Strategy::GuidedNoContextCue,
                                       Strategy::GuidedNoCues,  Strategy::RandomBFS,         Strategy::RandomDFS,
                                       Strategy::SequentialBFS, Strategy::SequentialDFS};

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Outcome of `runs` searches of one strategy on one scene.
SceneCell evaluate(const std::string& name, const std::function<SearchOutcome(std::uint64_t)>& run,
                   const std::vector<std::uint64_t>& seeds, std::size_t scene_index, const TraceSink& sink) {
  SceneCell cell;
  cell.strategy = name;
  double total = 0.0;
  std::size_t counted = 0;
  try {
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const SearchOutcome out = run(seeds[k]);
      if (k == 0) {
        cell.outcome = std::string(to_string(out.trace.outcome));
        if (sink) sink(scene_index, name, out.trace);
      }
      if (out.trace.outcome == OutcomeKind::NotFound) continue;
      const SearchLength len = search_length(out.trace);
      cell.excluded = len.excluded;
      total += static_cast<double>(len.steps);
      ++counted;
    }
  } catch (const Error& e) {
    cell.outcome = "error";
    cell.error = e.what();
    cell.length.reset();
    return cell;
  }
  if (counted > 0) cell.length = total / static_cast<double>(counted);
  return cell;
}

void summarize(ResultTable& table, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    StrategySummary s;
    s.strategy = name;
    s.n_scenes = table.rows.size();
    double total = 0.0;
    std::size_t successes = 0;
    for (const auto& row : table.rows) {
      const SceneCell* c = row.find(name);
      if (!c) continue;
      if (!c->error.empty()) {
        ++s.n_errors;
        continue;
      }
      if (!c->length) continue;
      ++successes;
      if (c->excluded) continue;
      total += *c->length;
      ++s.n_included;
    }
    s.success_rate = s.n_scenes ? static_cast<double>(successes) / static_cast<double>(s.n_scenes) : 0.0;
    s.mean_search_length = s.n_included ? total / static_cast<double>(s.n_included) : 0.0;
    table.summaries.push_back(s);
  }
}

std::int64_t clamp_coord(double v, std::int64_t lo, std::int64_t hi) {
  return std::clamp(static_cast<std::int64_t>(std::floor(v)), lo, hi);
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Guided: return "guided";
    case Strategy::GuidedNoTargetCue: return "guided_no_target_cue";
    case Strategy::GuidedNoContextCue: return "guided_no_context_cue";
    case Strategy::GuidedNoCues: return "guided_no_cues";
    case Strategy::RandomBFS: return "random_bfs";
    case Strategy::RandomDFS: return "random_dfs";
    case Strategy::SequentialBFS: return "sequential_bfs";
    case Strategy::SequentialDFS: return "sequential_dfs";
  }
  return "guided";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
  for (Strategy s : kAllStrategies)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

bool is_random(Strategy s) { return s == Strategy::RandomBFS || s == Strategy::RandomDFS; }

SearchOutcome run_strategy(Strategy s, const PerceptionBackend& backend, const Rect& root, std::string_view target,
                           const SearchParams& p, std::uint64_t seed) {
  switch (s) {
    case Strategy::Guided: return vstar_search(backend, root, target, p);
    case Strategy::GuidedNoTargetCue: return vstar_search(backend, root, target, p, CuePolicy{false, true});
    case Strategy::GuidedNoContextCue: return vstar_search(backend, root, target, p, CuePolicy{true, false});
    case Strategy::GuidedNoCues: return vstar_search(backend, root, target, p, CuePolicy{false, false});
    case Strategy::RandomBFS: return baseline_search(BaselineStrategy::RandomBFS, backend, root, target, p, seed);
    case Strategy::RandomDFS: return baseline_search(BaselineStrategy::RandomDFS, backend, root, target, p, seed);
    case Strategy::SequentialBFS:
      return baseline_search(BaselineStrategy::SequentialBFS, backend, root, target, p, seed);
    case Strategy::SequentialDFS:
      return baseline_search(BaselineStrategy::SequentialDFS, backend, root, target, p, seed);
  }
  throw InvalidArgument("unknown strategy");
}

void ExperimentConfig::validate() const {
  if (n_scenes < 1) throw InvalidArgument("experiment: n_scenes must be >= 1");
  if (!extent.valid()) throw InvalidArgument("experiment: invalid extent");
  if (target_min < 1 || target_max < target_min || target_max > std::min(extent.w, extent.h))
    throw InvalidArgument("experiment: target size range must fit inside the extent");
  if (!(cue_fidelity >= 0.0 && cue_fidelity <= 1.0)) throw InvalidArgument("experiment: cue_fidelity outside [0, 1]");
  if (!(noise_level >= 0.0)) throw InvalidArgument("experiment: negative noise_level");
  if (strategies.empty()) throw InvalidArgument("experiment: no strategies");
  if (seeds.empty()) throw InvalidArgument("experiment: no seeds");
  params.validate();
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["n_scenes"] = c.n_scenes;
  j["extent"] = rect_to_json(c.extent);
  j["target_size_range"] = {c.target_min, c.target_max};
  j["cue_fidelity"] = c.cue_fidelity;
  j["noise_level"] = c.noise_level;
  j["confidence_jitter"] = c.confidence_jitter;
  j["strategies"] = Json::array();
  for (Strategy s : c.strategies) j["strategies"].push_back(std::string(to_string(s)));
  j["seeds"] = c.seeds;
  j["scene_seed"] = c.scene_seed;
  j["params"] = params_to_json(c.params);
  j["cue_grid"] = c.oracle.grid;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  if (!j.is_object()) throw DataError("config: expected an object");
  try {
    c.n_scenes = j.value("n_scenes", c.n_scenes);
    if (j.contains("extent")) c.extent = rect_from_json(j.at("extent"));
    if (j.contains("target_size_range")) {
      const Json& r = j.at("target_size_range");
      if (!r.is_array() || r.size() != 2) throw DataError("config: target_size_range must be [min, max]");
      c.target_min = r[0].get<std::int64_t>();
      c.target_max = r[1].get<std::int64_t>();
    }
    c.cue_fidelity = j.value("cue_fidelity", c.cue_fidelity);
    c.noise_level = j.value("noise_level", c.noise_level);
    c.confidence_jitter = j.value("confidence_jitter", c.confidence_jitter);
    if (j.contains("strategies")) {
      c.strategies.clear();
      for (const auto& s : j.at("strategies")) {
        const auto parsed = strategy_from_string(s.get<std::string>());
        if (!parsed) throw DataError("config: unknown strategy " + s.get<std::string>());
        c.strategies.push_back(*parsed);
      }
    }
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    c.scene_seed = j.value("scene_seed", c.scene_seed);
    if (j.contains("params")) c.params = params_from_json(j.at("params"));
    c.oracle.grid = j.value("cue_grid", c.oracle.grid);
    c.workers = j.value("workers", c.workers);
    c.validate();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  return c;
}

std::uint64_t scene_seed(const ExperimentConfig& cfg, std::size_t index) {
  return derive_seed({cfg.scene_seed, static_cast<std::uint64_t>(index)});
}

SyntheticScene generate_scene(std::uint64_t seed, const ExperimentConfig& cfg) {
  cfg.validate();
  Rng rng(seed);
  const std::int64_t w = rng.between(cfg.target_min, cfg.target_max);
  const std::int64_t h = rng.between(cfg.target_min, cfg.target_max);
  const std::int64_t x = rng.between(cfg.extent.x, cfg.extent.right() - w);
  const std::int64_t y = rng.between(cfg.extent.y, cfg.extent.bottom() - h);
  const Rect box{x, y, w, h};

  Rect quadrant = cfg.extent;
  for (const Rect& child : subdivide(cfg.extent, 1))
    if (child.contains(box.center_x(), box.center_y())) quadrant = child;
  const auto gx = static_cast<std::int64_t>(std::llround(0.1 * static_cast<double>(quadrant.w)));
  const auto gy = static_cast<std::int64_t>(std::llround(0.1 * static_cast<double>(quadrant.h)));
  Rect context = intersection(
      Rect::from_corners(quadrant.x - gx, quadrant.y - gy, quadrant.right() + gx, quadrant.bottom() + gy), cfg.extent);
  context = Rect::from_corners(std::min(context.x, box.x), std::min(context.y, box.y),
                               std::max(context.right(), box.right()), std::max(context.bottom(), box.bottom()));

  SyntheticScene s;
  s.extent = cfg.extent;
  s.targets.push_back({"target", box, 1.0});
  s.context_regions["target"] = context;
  s.cue_fidelity = cfg.cue_fidelity;
  s.noise_level = cfg.noise_level;
  s.confidence_jitter = cfg.confidence_jitter;
  s.seed = seed;
  s.validate();
  return s;
}

const SceneCell* SceneRow::find(std::string_view strategy) const {
  for (const auto& c : cells)
    if (c.strategy == strategy) return &c;
  return nullptr;
}

const StrategySummary* ResultTable::find(std::string_view strategy) const {
  for (const auto& s : summaries)
    if (s.strategy == strategy) return &s;
  return nullptr;
}

PairedLengths paired_lengths(const ResultTable& t, std::string_view a, std::string_view b) {
  PairedLengths out;
  for (const auto& row : t.rows) {
    const SceneCell* ca = row.find(a);
    const SceneCell* cb = row.find(b);
    if (!ca || !cb || !ca->length || !cb->length || ca->excluded || cb->excluded) continue;
    out.a.push_back(*ca->length);
    out.b.push_back(*cb->length);
  }
  return out;
}

Json table_to_json(const ResultTable& t) {
  Json j;
  j["title"] = t.title;
  j["config"] = t.config;
  j["summary"] = Json::array();
  for (const auto& s : t.summaries) {
    Json sj;
    sj["strategy"] = s.strategy;
    sj["mean_search_length"] = s.mean_search_length;
    sj["success_rate"] = s.success_rate;
    sj["n_included"] = s.n_included;
    sj["n_scenes"] = s.n_scenes;
    sj["n_errors"] = s.n_errors;
    j["summary"].push_back(sj);
  }
  j["scenes"] = Json::array();
  for (const auto& row : t.rows) {
    Json rj;
    rj["index"] = row.index;
    rj["id"] = row.id;
    rj["seed"] = row.seed;
    rj["target"] = rect_to_json(row.target);
    rj["results"] = Json::array();
    for (const auto& c : row.cells) {
      Json cj;
      cj["strategy"] = c.strategy;
      cj["outcome"] = c.outcome;
      cj["length"] = c.length ? Json(*c.length) : Json(nullptr);
      cj["excluded"] = c.excluded;
      if (!c.error.empty()) cj["error"] = c.error;
      rj["results"].push_back(cj);
    }
    j["scenes"].push_back(rj);
  }
  j["skipped_records"] = t.skipped_records;
  if (!t.notice.empty()) j["notice"] = t.notice;
  return j;
}

std::string table_to_markdown(const ResultTable& t) {
  std::string out = "<!-- config: " + t.config.dump() + " -->\n\n";
  out += "# " + t.title + "\n\n";
  if (!t.notice.empty()) out += t.notice + "\n\n";
  out += "| Strategy | Search Length | Success Rate | Included | Errors |\n";
  out += "|---|---:|---:|---:|---:|\n";
  for (const auto& s : t.summaries) {
    out += "| " + s.strategy + " | " + format_fixed(s.mean_search_length, 2) + " | " +
           format_fixed(s.success_rate, 3) + " | " + std::to_string(s.n_included) + "/" + std::to_string(s.n_scenes) +
           " | " + std::to_string(s.n_errors) + " |\n";
  }
  if (t.skipped_records > 0) out += "\nSkipped malformed records: " + std::to_string(t.skipped_records) + "\n";
  return out;
}

ResultTable run_experiment(const ExperimentConfig& cfg, const TraceSink& sink) {
  cfg.validate();
  ResultTable table;
  table.title = "Search length by strategy";
  table.config = config_to_json(cfg);
  table.rows.resize(cfg.n_scenes);
  const std::vector<std::uint64_t> single_seed{0};

  parallel_for(cfg.n_scenes, cfg.workers, [&](std::size_t i) {
    const std::uint64_t seed = scene_seed(cfg, i);
    const SyntheticScene scene = generate_scene(seed, cfg);
    const OracleBackend backend(scene, cfg.oracle);
    SceneRow& row = table.rows[i];
    row.index = i;
    row.id = "scene_" + std::to_string(i);
    row.seed = seed;
    row.target = scene.targets.front().box;
    for (Strategy s : cfg.strategies) {
      const std::string name(to_string(s));
      auto run = [&](std::uint64_t strategy_seed) {
        return run_strategy(s, backend, scene.extent, "target", cfg.params, derive_seed({seed, strategy_seed}));
      };
      row.cells.push_back(evaluate(name, run, is_random(s) ? cfg.seeds : single_seed, i, sink));
    }
  });

  std::vector<std::string> names;
  for (Strategy s : cfg.strategies) names.emplace_back(to_string(s));
  summarize(table, names);
  return table;
}

ResultTable ablate_cues(ExperimentConfig cfg, const TraceSink& sink) {
  cfg.strategies = {Strategy::Guided, Strategy::GuidedNoTargetCue, Strategy::GuidedNoContextCue};
  ResultTable t = run_experiment(cfg, sink);
  t.title = "Cue ablation";
  return t;
}

Json fixation_record_to_json(const FixationRecord& r) {
  Json j;
  j["image_id"] = r.image_id;
  j["target"] = r.target;
  j["extent"] = rect_to_json(r.fixations.image_extent);
  j["points"] = Json::array();
  for (const auto& p : r.fixations.points) j["points"].push_back({p.x, p.y});
  j["target_box"] = rect_to_json(r.target_box);
  return j;
}

FixationRecord fixation_record_from_json(const Json& j) {
  FixationRecord r;
  try {
    r.image_id = j.at("image_id").is_string() ? j.at("image_id").get<std::string>() : j.at("image_id").dump();
    r.target = j.value("target", std::string("target"));
    r.fixations.image_extent = rect_from_json(j.at("extent"));
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw DataError("fixation record: point must be [x, y]");
      r.fixations.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    r.target_box = rect_from_json(j.at("target_box"));
    r.fixations.validate();
    if (!r.fixations.image_extent.contains(r.target_box))
      throw DataError("fixation record: target box outside extent");
    if (r.target.empty()) throw DataError("fixation record: empty target name");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("fixation record: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  return r;
}

std::vector<FixationRecord> read_fixation_records(const std::string& path, std::size_t& skipped) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<FixationRecord> out;
  skipped = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(fixation_record_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception&) {
      ++skipped;
    } catch (const DataError&) {
      ++skipped;
    }
  }
  return out;
}

void write_fixation_records(const std::string& path, const std::vector<FixationRecord>& records) {
  std::string text;
  for (const auto& r : records) text += fixation_record_to_json(r).dump() + "\n";
  write_text_file(path, text);
}

std::vector<FixationRecord> synthesize_fixation_records(std::size_t n, std::uint64_t seed,
                                                        const ExperimentConfig& cfg) {
  std::vector<FixationRecord> out;
  const Rect& e = cfg.extent;
  const double span = static_cast<double>(std::max(e.w, e.h));
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = derive_seed({seed, static_cast<std::uint64_t>(i)});
    const SyntheticScene scene = generate_scene(s, cfg);
    const Rect box = scene.targets.front().box;
    Rng rng(derive_seed({s, 0xf1}));
    FixationRecord r;
    r.image_id = "synthetic_" + std::to_string(i);
    r.target_box = box;
    r.fixations.image_extent = e;
    auto push = [&](double x, double y) {
      r.fixations.points.push_back({static_cast<double>(clamp_coord(x, e.x, e.right() - 1)),
                                    static_cast<double>(clamp_coord(y, e.y, e.bottom() - 1))});
    };
    const double cx = static_cast<double>(e.x) + static_cast<double>(e.w) / 2.0;
    const double cy = static_cast<double>(e.y) + static_cast<double>(e.h) / 2.0;
    const double tx = static_cast<double>(box.center_x());
    const double ty = static_cast<double>(box.center_y());
    push(cx + rng.uniform(-0.05, 0.05) * span, cy + rng.uniform(-0.05, 0.05) * span);
    const auto saccades = rng.between(1, 3);
    for (std::int64_t k = 1; k <= saccades; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(saccades + 1);
      push(cx + f * (tx - cx) + rng.uniform(-0.08, 0.08) * span, cy + f * (ty - cy) + rng.uniform(-0.08, 0.08) * span);
    }
    const auto dwell = rng.between(3, 5);
    const double rx = 0.75 * static_cast<double>(box.w);
    const double ry = 0.75 * static_cast<double>(box.h);
    for (std::int64_t k = 0; k < dwell; ++k) push(tx + rng.uniform(-rx, rx), ty + rng.uniform(-ry, ry));
    push(tx, ty);
    out.push_back(std::move(r));
  }
  return out;
}

std::string fixation_strategy_name(double gamma) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "fixation_g%g", gamma);
  return buf;
}

ResultTable replay_records(const std::vector<FixationRecord>& records, const ReplayConfig& cfg, std::size_t skipped,
                           const TraceSink& sink) {
  cfg.params.validate();
  for (double g : cfg.gammas)
    if (!(g > 0.0 && g < 1.0)) throw InvalidArgument("replay: gamma must lie in (0, 1)");
  ResultTable table;
  table.title = "Search length with human fixation guidance";
  Json config;
  config["gammas"] = cfg.gammas;
  config["sigma"] = cfg.sigma;
  config["amplitude"] = cfg.amplitude;
  config["params"] = params_to_json(cfg.params);
  config["seeds"] = cfg.seeds;
  config["cue_grid"] = cfg.oracle.grid;
  table.config = config;
  table.skipped_records = skipped;
  if (records.empty()) table.notice = "No fixation records to replay.";
  table.rows.resize(records.size());
  const std::vector<std::uint64_t> single_seed{0};

  parallel_for(records.size(), cfg.workers, [&](std::size_t i) {
    const FixationRecord& rec = records[i];
    SyntheticScene scene;
    scene.extent = rec.fixations.image_extent;
    scene.targets.push_back({rec.target, rec.target_box, 1.0});
    scene.cue_fidelity = 0.0;
    scene.seed = derive_seed({static_cast<std::uint64_t>(i)});
    SceneRow& row = table.rows[i];
    row.index = i;
    row.id = rec.image_id;
    row.seed = scene.seed;
    row.target = rec.target_box;
    for (double gamma : cfg.gammas) {
      FixationGuidance g;
      g.gamma = gamma;
      g.sigma = cfg.sigma;
      g.amplitude = cfg.amplitude;
      const FixationBackend backend(scene, rec.fixations, g, cfg.oracle);
      auto run = [&](std::uint64_t) { return vstar_search(backend, scene.extent, rec.target, cfg.params); };
      row.cells.push_back(evaluate(fixation_strategy_name(gamma), run, single_seed, i, sink));
    }
    const OracleBackend oracle(scene, cfg.oracle);
    for (BaselineStrategy b : cfg.baselines) {
      const bool random = b == BaselineStrategy::RandomBFS || b == BaselineStrategy::RandomDFS;
      auto run = [&](std::uint64_t seed) {
        return baseline_search(b, oracle, scene.extent, rec.target, cfg.params, derive_seed({scene.seed, seed}));
      };
      row.cells.push_back(evaluate(std::string(to_string(b)), run, random ? cfg.seeds : single_seed, i, sink));
    }
  });

  std::vector<std::string> names;
  for (double g : cfg.gammas) names.push_back(fixation_strategy_name(g));
  for (BaselineStrategy b : cfg.baselines) names.emplace_back(to_string(b));
  summarize(table, names);
  return table;
}

ResultTable replay_fixations(const std::string& dataset_path, const ReplayConfig& cfg, const TraceSink& sink) {
  std::size_t skipped = 0;
  const auto records = read_fixation_records(dataset_path, skipped);
  return replay_records(records, cfg, skipped, sink);
}

}  // namespace vstar
