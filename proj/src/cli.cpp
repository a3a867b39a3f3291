#include "vstar/cli.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vstar/bench.hpp"
#include "vstar/error.hpp"
#include "vstar/image.hpp"
#include "vstar/remote.hpp"
#include "vstar/seal.hpp"
#include "vstar/trace_io.hpp"

namespace vstar {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string params_file;
  std::string out_dir = ".";
  std::string format = "json";
  std::string backend = "oracle";
  std::string endpoint;
  std::string scene;
  std::string fixations;
  std::optional<double> high_conf;
  std::optional<double> low_conf;
  std::optional<double> delta_base;
  std::optional<double> delta_decay;
  std::optional<double> delta_floor;
  std::optional<std::int64_t> min_side;
  std::size_t workers = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base random seed");
  cmd->add_option("--params", c.params_file, "JSON file overriding search parameters");
  cmd->add_option("--out", c.out_dir, "Output directory");
  cmd->add_option("--format", c.format, "Summary format on stdout")->check(CLI::IsMember({"json", "md"}));
  cmd->add_option("--backend", c.backend, "Perception backend")
      ->check(CLI::IsMember({"oracle", "fixation", "remote"}));
  cmd->add_option("--endpoint", c.endpoint, "Base URL of the remote backend");
  cmd->add_option("--scene", c.scene, "Synthetic scene JSON file");
  cmd->add_option("--fixations", c.fixations, "Fixation records (JSON lines)");
  cmd->add_option("--high-conf", c.high_conf, "Confidence accepted immediately");
  cmd->add_option("--low-conf", c.low_conf, "Confidence accepted after an exhausted search");
  cmd->add_option("--delta-base", c.delta_base, "Cue threshold at level 0");
  cmd->add_option("--delta-decay", c.delta_decay, "Per-level cue threshold decay");
  cmd->add_option("--delta-floor", c.delta_floor, "Lowest cue threshold");
  cmd->add_option("--min-side", c.min_side, "Smallest patch side worth subdividing into");
  cmd->add_option("--workers", c.workers, "Worker threads for bench commands");
}

// Flags > params file > built-in defaults.
SearchParams resolve_params(const Common& c, SearchParams base = {}) {
  if (!c.params_file.empty()) base = params_from_json(read_json_file(c.params_file), base);
  if (c.high_conf) base.high_conf = *c.high_conf;
  if (c.low_conf) base.low_conf = *c.low_conf;
  if (c.delta_base) base.delta_base = *c.delta_base;
  if (c.delta_decay) base.delta_decay = *c.delta_decay;
  if (c.delta_floor) base.delta_floor = *c.delta_floor;
  if (c.min_side) base.min_side = *c.min_side;
  try {
    base.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return base;
}

void require_backend_inputs(const Common& c) {
  if (c.backend == "remote" && c.endpoint.empty()) throw UsageError("--backend remote requires --endpoint");
  if (c.backend == "oracle" && c.scene.empty()) throw UsageError("--backend oracle requires --scene");
  if (c.backend == "fixation" && c.fixations.empty()) throw UsageError("--backend fixation requires --fixations");
}

std::string out_path(const Common& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

struct Backend {
  std::unique_ptr<PerceptionBackend> backend;
  Rect root;
};

Backend make_backend(const Common& c, const std::string& image, std::size_t record, double gamma, double sigma) {
  require_backend_inputs(c);
  Backend b;
  std::optional<Rect> extent;
  if (!image.empty()) extent = read_pnm_extent(image);
  if (c.backend == "fixation") {
    std::size_t skipped = 0;
    const auto records = read_fixation_records(c.fixations, skipped);
    if (record >= records.size()) throw DataError("fixation record index out of range");
    const FixationRecord& rec = records[record];
    SyntheticScene scene;
    scene.extent = rec.fixations.image_extent;
    scene.targets.push_back({rec.target, rec.target_box, 1.0});
    scene.cue_fidelity = 0.0;
    b.root = scene.extent;
    b.backend = fixation_backend(scene, rec.fixations, gamma, sigma);
    return b;
  }
  std::optional<SyntheticScene> scene;
  if (!c.scene.empty()) scene = scene_from_json(read_json_file(c.scene));
  if (c.backend == "oracle") {
    b.root = scene->extent;
    b.backend = std::make_unique<OracleBackend>(*scene);
  } else {
    if (scene) {
      b.root = scene->extent;
    } else if (extent) {
      b.root = *extent;
    } else {
      throw UsageError("--backend remote needs --scene or --image to know the image extent");
    }
    b.backend = std::make_unique<RemoteBackend>(c.endpoint);
  }
  if (extent && c.backend == "oracle" && !(*extent == b.root))
    throw DataError("image extent does not match the scene extent");
  return b;
}

void print_table(const ResultTable& t, const Common& c, std::ostream& out) {
  if (c.format == "md") {
    out << table_to_markdown(t);
  } else {
    Json j;
    j["title"] = t.title;
    j["summary"] = table_to_json(t)["summary"];
    out << j.dump(2) << "\n";
  }
}

void write_table(const ResultTable& t, const Common& c) {
  write_json_file(out_path(c, "results.json"), table_to_json(t));
  write_text_file(out_path(c, "results.md"), table_to_markdown(t));
}

TraceSink trace_writer(const Common& c, bool enabled) {
  if (!enabled) return {};
  const std::string dir = out_path(c, "traces");
  return [dir](std::size_t scene, const std::string& strategy, const SearchTrace& t) {
    char name[64];
    std::snprintf(name, sizeof name, "scene_%04zu_", scene);
    write_json_file((std::filesystem::path(dir) / (name + strategy + ".json")).string(), trace_to_json(t));
  };
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LLM-guided hierarchical visual search and search-length benchmarks", "vstar"};
  app.set_version_flag("--version", std::string(VSTAR_VERSION));
  app.require_subcommand(1);

  Common c;

  auto* search = app.add_subcommand("search", "Run one search and write trace.json");
  add_common(search, c);
  std::string target;
  std::string strategy = "guided";
  std::string image;
  std::size_t record = 0;
  double gamma = 0.9;
  double sigma = 0.0;
  search->add_option("--target", target, "Target expression")->required();
  search->add_option("--strategy", strategy, "guided, a cue ablation, or a baseline");
  search->add_option("--image", image, "PNM image whose header gives the extent");
  search->add_option("--record", record, "Fixation record index for --backend fixation");
  search->add_option("--gamma", gamma, "Fixation order decay");
  search->add_option("--sigma", sigma, "Fixation Gaussian spread in pixels (0 = default)");

  auto* seal = app.add_subcommand("seal", "Answer a question with search-augmented working memory");
  add_common(seal, c);
  std::string action = "answer";
  std::string question;
  std::string out_trace;
  bool dump_prompt = false;
  std::vector<std::string> targets;
  std::string vqa_script;
  std::string canned_answer;
  bool concurrent = false;
  bool training_projection = false;
  seal->add_option("action", action, "Only 'answer' is supported")->check(CLI::IsMember({"answer"}));
  seal->add_option("--image", image, "Global image (PNM)");
  seal->add_option("--question", question, "Question text")->required();
  seal->add_option("--out-trace", out_trace, "Write search traces to this file");
  seal->add_flag("--dump-prompt", dump_prompt, "Print the rendered working-memory prompt");
  seal->add_option("--targets", targets, "Scripted missing targets")->delimiter(',');
  seal->add_option("--vqa-script", vqa_script, "JSON {targets, answer} for the scripted VQA model");
  seal->add_option("--answer", canned_answer, "Scripted answer text");
  seal->add_flag("--concurrent", concurrent, "Search targets concurrently");
  seal->add_flag("--training-projection", training_projection, "Use the training-time projection rule");

  std::string config_file;
  bool traces = false;
  bool dump_scenes = false;
  auto* bench = app.add_subcommand("bench", "Compare search strategies on synthetic scenes");
  auto* ablate = app.add_subcommand("ablate", "Guided search against its cue ablations");
  for (auto* cmd : {bench, ablate}) {
    add_common(cmd, c);
    cmd->add_option("--config", config_file, "Experiment config JSON");
    cmd->add_flag("--traces", traces, "Write per-scene trace files");
    cmd->add_flag("--dump-scenes", dump_scenes, "Write the generated scene files");
  }

  auto* replay = app.add_subcommand("replay", "Replay human fixations as search guidance");
  add_common(replay, c);
  std::vector<double> gammas;
  std::size_t synthesize = 0;
  replay->add_option("--gamma", gammas, "Fixation order decay (repeatable)");
  replay->add_option("--sigma", sigma, "Gaussian spread in pixels (0 = 1/16 of the longer side)");
  replay->add_option("--synthesize", synthesize, "Write N synthetic records to --fixations first");
  replay->add_flag("--traces", traces, "Write per-record trace files");

  auto* render = app.add_subcommand("render", "Draw a trace (and optionally a heatmap) as images");
  add_common(render, c);
  std::string trace_file;
  std::string heatmap_file;
  std::size_t canvas = 512;
  render->add_option("--trace", trace_file, "Trace JSON file");
  render->add_option("--heatmap", heatmap_file, "Heatmap JSON file");
  render->add_option("--canvas", canvas, "Longer side of the trace canvas in pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (search->parsed()) {
      const auto parsed = strategy_from_string(strategy);
      if (!parsed) throw UsageError("unknown strategy " + strategy);
      const SearchParams p = resolve_params(c);
      Backend b = make_backend(c, image, record, gamma, sigma);
      const SearchOutcome o = run_strategy(*parsed, *b.backend, b.root, target, p, c.seed.value_or(0));
      write_json_file(out_path(c, "trace.json"), trace_to_json(o.trace));
      err << "search: " << to_string(o.trace.outcome) << " after " << o.trace.steps.size() << " steps\n";
      return kExitOk;
    }

    if (seal->parsed()) {
      if (c.backend == "fixation") throw UsageError("seal supports --backend oracle or remote");
      const SearchParams p = resolve_params(c);
      Backend b = make_backend(c, image, 0, gamma, sigma);
      if (!vqa_script.empty()) {
        const Json script = read_json_file(vqa_script);
        try {
          targets = script.value("targets", std::vector<std::string>{});
          canned_answer = script.value("answer", canned_answer);
        } catch (const nlohmann::json::exception& e) {
          throw DataError(std::string("vqa script: ") + e.what());
        }
      }
      ScriptedVqa vqa(targets, canned_answer);
      SealOptions opts;
      opts.concurrent_searches = concurrent;
      if (training_projection) opts.projection = ProjectionVariant::TrainingTime;
      const ImageRef ref{image.empty() ? c.scene : image, b.root};
      const SealResult r = seal_answer(vqa, *b.backend, ref, question, p, opts);
      if (!out_trace.empty()) {
        Json all = Json::array();
        for (const auto& t : r.traces) all.push_back(trace_to_json(t));
        write_json_file(out_trace, all);
      }
      if (c.out_dir != ".") {
        Json j;
        j["vwm"] = vwm_to_json(r.vwm);
        j["projection"] = projection_to_json(r.projection);
        j["params"] = params_to_json(p);
        write_json_file(out_path(c, "vwm.json"), j);
      }
      for (const auto& e : r.search_errors) err << "search error: " << e << "\n";
      if (dump_prompt) out << r.prompt << "\n";
      out << r.response << "\n";
      return kExitOk;
    }

    if (bench->parsed() || ablate->parsed()) {
      ExperimentConfig cfg = config_file.empty() ? ExperimentConfig{} : config_from_json(read_json_file(config_file));
      if (c.seed) cfg.scene_seed = *c.seed;
      cfg.params = resolve_params(c, cfg.params);
      cfg.workers = c.workers;
      if (dump_scenes)
        for (std::size_t i = 0; i < cfg.n_scenes; ++i) {
          char name[64];
          std::snprintf(name, sizeof name, "scenes/scene_%04zu.json", i);
          write_json_file(out_path(c, name), scene_to_json(generate_scene(scene_seed(cfg, i), cfg)));
        }
      const ResultTable t = ablate->parsed() ? ablate_cues(cfg, trace_writer(c, traces))
                                             : run_experiment(cfg, trace_writer(c, traces));
      write_table(t, c);
      print_table(t, c, out);
      return kExitOk;
    }

    if (replay->parsed()) {
      if (c.fixations.empty()) throw UsageError("replay requires --fixations");
      ReplayConfig cfg;
      if (!gammas.empty()) cfg.gammas = gammas;
      cfg.sigma = sigma;
      cfg.params = resolve_params(c);
      cfg.workers = c.workers;
      if (synthesize > 0) {
        ExperimentConfig scenes;
        write_fixation_records(c.fixations, synthesize_fixation_records(synthesize, c.seed.value_or(0), scenes));
      }
      const ResultTable t = replay_fixations(c.fixations, cfg, trace_writer(c, traces));
      if (!t.notice.empty()) err << t.notice << "\n";
      if (t.skipped_records > 0) err << "skipped " << t.skipped_records << " malformed records\n";
      write_table(t, c);
      print_table(t, c, out);
      return kExitOk;
    }

    if (render->parsed()) {
      if (trace_file.empty() && heatmap_file.empty()) throw UsageError("render requires --trace or --heatmap");
      if (!trace_file.empty()) {
        const SearchTrace t = trace_from_json(read_json_file(trace_file));
        if (t.steps.empty()) throw DataError("trace has no steps");
        write_ppm(out_path(c, "trace.ppm"), render_trace(t, t.steps.front().patch, canvas));
      }
      if (!heatmap_file.empty())
        write_pgm(out_path(c, "heatmap.pgm"), render_heatmap(heatmap_from_json(read_json_file(heatmap_file))));
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TransportError& e) {
    err << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace vstar
