// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <list>
#include <mutex>
#include <string>
#include <vector>

#include "golden_cases.hpp"
#include "vstar/bench.hpp"
#include "vstar/rng.hpp"
#include "vstar/search.hpp"
#include "vstar/stats.hpp"
#include "vstar/trace_io.hpp"

using namespace vstar;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

void fail(Verdict& v, const std::string& why) {
  v.pass = false;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += why;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Verdict threshold_schedule() {
  Verdict v;
  const double expect[] = {6.0, 4.2, 3.0, 3.0, 3.0};
  for (int l = 0; l < 5; ++l) {
    const double got = cue_threshold(l, SearchParams{});
    if (std::abs(got - expect[l]) > 1e-12) fail(v, fmt("level %g gave %.15g", l, got));
  }
  return v;
}

Verdict subdivision_partition() {
  Verdict v;
  Rng rng(1);
  std::size_t checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Rect r{rng.between(0, 10000), rng.between(0, 10000), rng.between(1, 8000), rng.between(1, 8000)};
    const auto kids = subdivide(r, rng.between(1, 300));
    if (kids.empty()) continue;
    ++checked;
    std::int64_t area = 0;
    for (std::size_t a = 0; a < kids.size(); ++a) {
      area += kids[a].area();
      if (!r.contains(kids[a])) fail(v, "child escapes parent");
      for (std::size_t b = a + 1; b < kids.size(); ++b)
        if (kids[a].intersects(kids[b])) fail(v, "children overlap");
    }
    if (area != r.area()) fail(v, "area mismatch");
    const bool landscape = r.w > 2 * r.h, portrait = r.h > 2 * r.w;
    for (std::size_t k = 0; k < 4; ++k) {
      const Rect& c = kids[k];
      if (landscape && (c.y != r.y || c.h != r.h)) fail(v, "landscape layout is not 1x4");
      if (portrait && (c.x != r.x || c.w != r.w)) fail(v, "portrait layout is not 4x1");
    }
    if (!landscape && !portrait) {
      if (kids[0].y != kids[1].y || kids[2].y != kids[3].y || kids[0].x != kids[2].x || kids[0].y == kids[2].y)
        fail(v, "balanced layout is not 2x2");
    }
    if (!v.pass) break;
  }
  v.detail = v.detail.empty() ? fmt("%g parents checked", double(checked)) : v.detail;
  return v;
}

Verdict astar_correspondence() {
  Verdict v;
  ExperimentConfig cfg;
  cfg.noise_level = 2.0;
  cfg.cue_fidelity = 0.6;
  cfg.scene_seed = 77;
  std::size_t nodes = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const OracleBackend o(generate_scene(scene_seed(cfg, i), cfg));
    const Rect root = o.scene().extent;
    const SearchOutcome out = vstar_search(o, root, "target", SearchParams{});

    struct Node { Rect patch; int level; double h; };
    std::list<Node> open{{root, 0, -std::numeric_limits<double>::infinity()}};
    std::vector<Rect> order;
    while (!open.empty()) {
      auto best = open.begin();
      for (auto it = open.begin(); it != open.end(); ++it)
        if (it->h < best->h) best = it;
      const Node n = *best;
      open.erase(best);
      order.push_back(n.patch);
      const auto r = o.locate_target({"target", n.patch});
      if (r.box && r.confidence >= 0.5) break;
      const auto kids = subdivide(n.patch, 224);
      if (kids.empty()) continue;
      Heatmap cue = r.cue;
      if (max_value(cue) < std::max(3.0, 6.0 * std::pow(0.7, n.level)))
        cue = o.locate_cue(o.contextual_cue({"target", n.patch}), n.patch);
      for (const Rect& k : kids) open.push_back({k, n.level + 1, -patch_priority(cue, k)});
    }
    nodes += order.size();
    if (order.size() != out.trace.steps.size()) {
      fail(v, fmt("scene %g: %g vs %g expansions", double(i), double(out.trace.steps.size()), double(order.size())));
      continue;
    }
    for (std::size_t k = 0; k < order.size(); ++k)
      if (!(order[k] == out.trace.steps[k].patch)) {
        fail(v, fmt("scene %g diverges at step %g", double(i), double(k)));
        break;
      }
  }
  if (v.pass) v.detail = fmt("%g expansions matched", double(nodes));
  return v;
}

Verdict strategy_ordering() {
  Verdict v;
  const ExperimentConfig cfg;
  const ResultTable t = run_experiment(cfg);
  auto compare = [&](const char* a, const char* b, Alternative alt, const char* label) {
    const auto pair = paired_lengths(t, a, b);
    const auto r = paired_bootstrap(pair.a, pair.b, alt);
    const double ma = t.find(a)->mean_search_length, mb = t.find(b)->mean_search_length;
    const bool ok = (alt == Alternative::Less ? ma < mb : ma <= mb) && r.p_value < 0.01;
    const std::string line = std::string(label) + fmt(" (%.2f vs %.2f, p=%.4f)", ma, mb, r.p_value);
    if (!ok) fail(v, "not " + line);
    return line;
  };
  std::string summary;
  summary += compare("guided", "guided_no_target_cue", Alternative::LessOrEqual, "guided <= no_target_cue") + "; ";
  summary += compare("guided", "guided_no_context_cue", Alternative::LessOrEqual, "guided <= no_context_cue") + "; ";
  summary += compare("guided", "sequential_bfs", Alternative::Less, "guided < sequential_bfs") + "; ";
  summary += compare("sequential_bfs", "random_bfs", Alternative::Less, "sequential_bfs < random_bfs") + "; ";
  summary += compare("sequential_bfs", "sequential_dfs", Alternative::Less, "sequential_dfs > sequential_bfs");
  v.detail = v.pass ? summary : v.detail + " | " + summary;
  return v;
}

Verdict per_scene_dominance() {
  Verdict v;
  ExperimentConfig cfg;
  const ResultTable t = run_experiment(cfg);
  std::size_t rows = 0;
  for (const auto& row : t.rows) {
    const SceneCell* g = row.find("guided");
    if (!g || !g->length || g->excluded) continue;
    ++rows;
    for (const char* b : {"random_bfs", "random_dfs", "sequential_bfs", "sequential_dfs"}) {
      const SceneCell* c = row.find(b);
      if (c && c->length && !c->excluded && *g->length > *c->length)
        fail(v, row.id + ": guided longer than " + b);
    }
  }
  if (v.pass) v.detail = fmt("%g included scenes", double(rows));
  return v;
}

Verdict random_bfs_expectation() {
  Verdict v;
  SyntheticScene s;
  const int n = 10000;
  double total = 0.0;
  // Single-level family: a 100 px target is detectable once a quadrant is
  // popped, never at the root; its quadrant rotates with the seed.
  const Rect boxes[] = {{300, 300, 100, 100}, {1500, 300, 100, 100}, {300, 1500, 100, 100}, {1500, 1500, 100, 100}};
  for (int seed = 0; seed < n; ++seed) {
    s.targets = {{"target", boxes[seed % 4], 1.0}};
    const OracleBackend o(s);
    const auto out = baseline_search(BaselineStrategy::RandomBFS, o, s.extent, "target", SearchParams{}, seed);
    total += double(search_length(out.trace).steps);
  }
  const double m = total / n;
  if (std::abs(m - 2.5) > 0.05) fail(v, fmt("mean %.4f", m));
  else v.detail = fmt("mean %.4f over %g seeds", m, n);
  return v;
}

Verdict fixation_replay() {
  Verdict v;
  const auto records = synthesize_fixation_records(200, 0, ExperimentConfig{});
  ReplayConfig cfg;
  cfg.gammas = {0.9};
  const ResultTable t = replay_records(records, cfg);
  const auto pair = paired_lengths(t, "fixation_g0.9", "sequential_bfs");
  const auto r = paired_bootstrap(pair.a, pair.b, Alternative::LessOrEqual);
  const double mf = t.find("fixation_g0.9")->mean_search_length, ms = t.find("sequential_bfs")->mean_search_length;
  const std::string line = fmt("fixation %.2f vs sequential_bfs %.2f, p=%.4f", mf, ms, r.p_value);
  if (!(mf <= ms && r.p_value < 0.01)) fail(v, line);
  else v.detail = line;
  return v;
}

Verdict golden_pipeline() {
  Verdict v;
  for (const auto& c : golden::cases()) {
    const auto r = golden::render(c, VSTAR_GOLDEN_DIR);
    if (r.memory != r.expected_memory) fail(v, "memory/projection mismatch for case " + c.name);
    if (r.prompt != r.expected_prompt) fail(v, "prompt mismatch for case " + c.name);
  }
  if (v.pass) v.detail = fmt("%g cases byte-identical", double(golden::cases().size()));
  return v;
}

Verdict fallback_path() {
  Verdict v;
  // detectability * 0.9 lands the confidences at 0.405 and 0.45.
  SyntheticScene s;
  s.targets = {{"target", {300, 300, 150, 150}, 0.45}, {"target", {1500, 1500, 150, 150}, 0.5}};
  const auto best = vstar_search(OracleBackend(s), s.extent, "target", SearchParams{});
  if (best.trace.outcome != OutcomeKind::BestEffort) fail(v, "expected BestEffort");
  else if (!(best.located->box == Rect{1500, 1500, 150, 150})) fail(v, "BestEffort box is not the max-confidence one");

  // Jittered into [0.3, 0.5): 0.4 +- 0.09.
  SyntheticScene j;
  j.targets = {{"target", {900, 1300, 120, 120}, 0.4 / 0.9}};
  j.confidence_jitter = 0.09;
  j.seed = 5;
  const auto jittered = vstar_search(OracleBackend(j), j.extent, "target", SearchParams{});
  if (jittered.trace.outcome != OutcomeKind::BestEffort) fail(v, "jittered scene is not BestEffort");

  SyntheticScene w;
  w.targets = {{"target", {300, 300, 150, 150}, 0.3}};
  const auto none = vstar_search(OracleBackend(w), w.extent, "target", SearchParams{});
  if (none.trace.outcome != OutcomeKind::NotFound || none.located) fail(v, "expected NotFound below 0.3");
  if (v.pass)
    v.detail = fmt("best-effort confidences %.3f and %.3f, not found below 0.3", best.located->confidence,
                   jittered.located->confidence);
  return v;
}

Verdict determinism() {
  Verdict v;
  ExperimentConfig cfg;
  std::vector<std::string> first, second;
  auto collect = [](std::vector<std::string>& into) {
    return [&into](std::size_t i, const std::string& s, const SearchTrace& t) {
      static std::mutex m;
      std::lock_guard lock(m);
      into.push_back(std::to_string(i) + s + trace_to_json(t).dump());
    };
  };
  const std::string a = table_to_json(run_experiment(cfg, collect(first))).dump(2);
  cfg.workers = 4;
  const std::string b = table_to_json(run_experiment(cfg, collect(second))).dump(2);
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  if (a != b) fail(v, "results.json differs");
  if (first != second) fail(v, "traces differ");
  if (v.pass) v.detail = fmt("%g traces compared", double(first.size()));
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "threshold schedule", 0.001, threshold_schedule},
      {2, "subdivision partition", 1, subdivision_partition},
      {3, "best-first order equals reference A*", 10, astar_correspondence},
      {4, "strategy ordering", 60, strategy_ordering},
      {5, "per-scene dominance", 60, per_scene_dominance},
      {6, "random BFS expectation", 10, random_bfs_expectation},
      {7, "fixation replay ordering", 30, fixation_replay},
      {8, "working memory, projection and prompt goldens", 1, golden_pipeline},
      {9, "fallback thresholds", 1, fallback_path},
      {10, "determinism", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      fail(v, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) fail(v, fmt("took %.3f s, limit %g s", secs, c.limit_s));
    if (!v.pass) ++failures;
    std::printf("%s AC%d %s [%.3f s] %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
