#include "vstar/search.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <queue>

#include "vstar/rng.hpp"

namespace vstar {

namespace {

struct QueueEntry {
  Rect patch;
  int level = 0;
  double priority = 0.0;
  std::uint64_t insertion_index = 0;
};

// Max-priority first; FIFO among equal priorities.
struct LowerPriority {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.insertion_index > b.insertion_index;
  }
};

// Shared bookkeeping for guided and baseline searches.
class SearchRun {
 public:
  SearchRun(const PerceptionBackend& backend, std::string_view target, const SearchParams& p, std::string strategy)
      : backend_(backend) {
    p.validate();
    if (target.empty()) throw InvalidArgument("search: empty target");
    trace_.target = std::string(target);
    trace_.params = p;
    trace_.strategy = std::move(strategy);
  }

  template <typename F>
  auto call(F&& f) {
    try {
      return f();
    } catch (const TransportError& e) {
      finish();
      throw SearchAborted(e.what(), trace_);
    }
  }

  // Localizes in the popped patch. Returns true when the search is over.
  bool visit(const QueueEntry& node, LocalizationResult& result) {
    SearchStep step;
    step.patch = node.patch;
    step.level = node.level;
    step.priority = node.priority;
    step.insertion_index = node.insertion_index;
    trace_.steps.push_back(step);
    result = call([&] { return backend_.locate_target(TargetQuery{trace_.target, node.patch}); });
    ++trace_.counters.locate_calls;
    const std::size_t index = trace_.steps.size() - 1;
    trace_.steps.back().confidence = result.confidence;
    if (result.box && (!best_ || result.confidence > best_->confidence)) {
      best_ = Detection{*result.box, result.confidence};
      best_step_ = index;
    }
    if (result.box && result.confidence >= trace_.params.high_conf) {
      trace_.outcome = OutcomeKind::Found;
      trace_.located = Detection{*result.box, result.confidence};
      trace_.locating_step = index;
      if (index == 0)
        for (const auto& d : result.detections)
          if (d.confidence >= trace_.params.high_conf) trace_.root_detections.push_back(d);
      return true;
    }
    return false;
  }

  SearchStep& last_step() { return trace_.steps.back(); }
  SearchCounters& counters() { return trace_.counters; }
  const SearchParams& params() const { return trace_.params; }
  const std::string& target() const { return trace_.target; }
  const PerceptionBackend& backend() const { return backend_; }

  SearchOutcome finish() {
    if (trace_.outcome != OutcomeKind::Found) {
      if (best_ && best_->confidence >= trace_.params.low_conf) {
        trace_.outcome = OutcomeKind::BestEffort;
        trace_.located = best_;
        trace_.locating_step = best_step_;
      } else {
        trace_.outcome = OutcomeKind::NotFound;
        trace_.located.reset();
        trace_.locating_step.reset();
      }
    }
    return SearchOutcome{trace_, trace_.located};
  }

 private:
  const PerceptionBackend& backend_;
  SearchTrace trace_;
  std::optional<Detection> best_;
  std::size_t best_step_ = 0;
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace

void SearchParams::validate() const {
  if (!(low_conf > 0.0 && low_conf <= high_conf && high_conf <= 1.0))
    throw InvalidArgument("search params: require 0 < low_conf <= high_conf <= 1");
  if (!(delta_decay > 0.0 && delta_decay < 1.0)) throw InvalidArgument("search params: delta_decay outside (0, 1)");
  if (!(delta_floor > 0.0)) throw InvalidArgument("search params: delta_floor must be > 0");
  if (!std::isfinite(delta_base)) throw InvalidArgument("search params: delta_base must be finite");
  if (min_side < 1) throw InvalidArgument("search params: min_side must be >= 1");
}

double cue_threshold(int level, const SearchParams& p) {
  if (level < 0) throw InvalidArgument("cue_threshold: negative level");
  return std::max(p.delta_floor, p.delta_base * std::pow(p.delta_decay, level));
}

std::string_view to_string(CueKind k) {
  switch (k) {
    case CueKind::TargetSpecific: return "target_specific";
    case CueKind::Contextual: return "contextual";
    case CueKind::None: return "none";
  }
  return "none";
}

std::string_view to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Found: return "found";
    case OutcomeKind::BestEffort: return "best_effort";
    case OutcomeKind::NotFound: return "not_found";
  }
  return "not_found";
}

std::string_view to_string(BaselineStrategy s) {
  switch (s) {
    case BaselineStrategy::RandomBFS: return "random_bfs";
    case BaselineStrategy::RandomDFS: return "random_dfs";
    case BaselineStrategy::SequentialBFS: return "sequential_bfs";
    case BaselineStrategy::SequentialDFS: return "sequential_dfs";
  }
  return "random_bfs";
}

SearchOutcome vstar_search(const PerceptionBackend& backend, const Rect& root, std::string_view target,
                           const SearchParams& p, const CuePolicy& policy) {
  if (!root.valid()) throw InvalidArgument("search: invalid root");
  SearchRun run(backend, target, p, "guided");
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, LowerPriority> queue;
  std::uint64_t inserted = 0;
  queue.push({root, 0, kInfinity, inserted++});

  while (!queue.empty()) {
    const QueueEntry node = queue.top();
    queue.pop();
    LocalizationResult located{std::nullopt, 0.0, {}, Heatmap::zeros(1, 1, node.patch)};
    if (run.visit(node, located)) break;

    const std::vector<Rect> children = subdivide(node.patch, p.min_side);
    if (children.empty()) continue;

    Heatmap cue = policy.target_cue ? std::move(located.cue)
                                    : Heatmap::zeros(located.cue.width(), located.cue.height(), node.patch);
    CueKind kind = CueKind::TargetSpecific;
    if (max_value(cue) < cue_threshold(node.level, p)) {
      kind = CueKind::Contextual;
      if (policy.contextual_cue) {
        const TargetQuery q{run.target(), node.patch};
        const std::string text = run.call([&] { return backend.contextual_cue(q); });
        cue = run.call([&] { return backend.locate_cue(text, node.patch); });
        run.counters().cue_calls += 2;
      } else {
        cue = Heatmap::zeros(cue.width(), cue.height(), node.patch);
      }
    }

    SearchStep& step = run.last_step();
    step.cue_kind = kind;
    for (const Rect& child : children) {
      const double priority = patch_priority(cue, child);
      step.children.push_back({child, priority});
      queue.push({child, node.level + 1, priority, inserted++});
    }
  }
  return run.finish();
}

SearchOutcome baseline_search(BaselineStrategy strategy, const PerceptionBackend& backend, const Rect& root,
                              std::string_view target, const SearchParams& p, std::uint64_t seed) {
  if (!root.valid()) throw InvalidArgument("search: invalid root");
  SearchRun run(backend, target, p, std::string(to_string(strategy)));
  Rng rng(seed);
  const bool random = strategy == BaselineStrategy::RandomBFS || strategy == BaselineStrategy::RandomDFS;
  const bool depth_first = strategy == BaselineStrategy::RandomDFS || strategy == BaselineStrategy::SequentialDFS;

  // BFS pops from the front; DFS pops from the back and pushes children
  // reversed so the first child in visiting order comes out next.
  std::deque<QueueEntry> frontier;
  std::uint64_t inserted = 0;
  frontier.push_back({root, 0, kInfinity, inserted++});

  while (!frontier.empty()) {
    QueueEntry node;
    if (depth_first) {
      node = frontier.back();
      frontier.pop_back();
    } else {
      node = frontier.front();
      frontier.pop_front();
    }
    LocalizationResult located{std::nullopt, 0.0, {}, Heatmap::zeros(1, 1, node.patch)};
    if (run.visit(node, located)) break;

    std::vector<Rect> children = subdivide(node.patch, p.min_side);
    if (children.empty()) continue;
    if (random) {
      rng.shuffle(std::span<Rect>(children));
    } else {
      std::reverse(children.begin(), children.end());
    }

    SearchStep& step = run.last_step();
    std::vector<QueueEntry> entries;
    for (const Rect& child : children) {
      // Recorded for inspection only; the order ignores it.
      const double priority = patch_priority(located.cue, child);
      step.children.push_back({child, priority});
      entries.push_back({child, node.level + 1, priority, inserted++});
    }
    if (depth_first) {
      frontier.insert(frontier.end(), entries.rbegin(), entries.rend());
    } else {
      frontier.insert(frontier.end(), entries.begin(), entries.end());
    }
  }
  return run.finish();
}

SearchLength search_length(const SearchTrace& t) {
  if (t.outcome == OutcomeKind::NotFound || !t.locating_step)
    throw InvalidArgument("search_length: undefined for a search that found nothing");
  const auto steps = static_cast<std::int64_t>(*t.locating_step);
  return {steps, steps == 0};
}

}  // namespace vstar
