#include "vstar/trace_io.hpp"

#include <cmath>
#include <limits>

#include "vstar/error.hpp"

namespace vstar {

namespace {

Json priority_to_json(double p) {
  if (std::isinf(p)) return p > 0 ? Json("inf") : Json("-inf");
  return Json(p);
}

double priority_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DataError("trace: bad priority " + s);
  }
  return j.get<double>();
}

Json detection_to_json(const Detection& d) {
  Json j;
  j["box"] = rect_to_json(d.box);
  j["confidence"] = d.confidence;
  return j;
}

Detection detection_from_json(const Json& j) { return {rect_from_json(j.at("box")), j.at("confidence").get<double>()}; }

CueKind cue_kind_from(const std::string& s) {
  if (s == "target_specific") return CueKind::TargetSpecific;
  if (s == "contextual") return CueKind::Contextual;
  if (s == "none") return CueKind::None;
  throw DataError("trace: unknown cue_kind " + s);
}

OutcomeKind outcome_from(const std::string& s) {
  if (s == "found") return OutcomeKind::Found;
  if (s == "best_effort") return OutcomeKind::BestEffort;
  if (s == "not_found") return OutcomeKind::NotFound;
  throw DataError("trace: unknown outcome " + s);
}

}  // namespace

Json params_to_json(const SearchParams& p) {
  Json j;
  j["high_conf"] = p.high_conf;
  j["low_conf"] = p.low_conf;
  j["delta_base"] = p.delta_base;
  j["delta_decay"] = p.delta_decay;
  j["delta_floor"] = p.delta_floor;
  j["min_side"] = p.min_side;
  return j;
}

SearchParams params_from_json(const Json& j, SearchParams base) {
  if (!j.is_object()) throw DataError("params: expected an object");
  try {
    base.high_conf = j.value("high_conf", base.high_conf);
    base.low_conf = j.value("low_conf", base.low_conf);
    base.delta_base = j.value("delta_base", base.delta_base);
    base.delta_decay = j.value("delta_decay", base.delta_decay);
    base.delta_floor = j.value("delta_floor", base.delta_floor);
    base.min_side = j.value("min_side", base.min_side);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("params: ") + e.what());
  }
  return base;
}

Json trace_to_json(const SearchTrace& t) {
  Json j;
  j["target"] = t.target;
  j["strategy"] = t.strategy;
  j["params"] = params_to_json(t.params);
  j["steps"] = Json::array();
  for (const auto& s : t.steps) {
    Json sj;
    sj["patch"] = rect_to_json(s.patch);
    sj["level"] = s.level;
    sj["priority"] = priority_to_json(s.priority);
    sj["insertion_index"] = s.insertion_index;
    sj["cue_kind"] = std::string(to_string(s.cue_kind));
    sj["confidence"] = s.confidence;
    sj["children"] = Json::array();
    for (const auto& c : s.children) {
      Json cj;
      cj["patch"] = rect_to_json(c.patch);
      cj["priority"] = priority_to_json(c.priority);
      sj["children"].push_back(cj);
    }
    j["steps"].push_back(sj);
  }
  Json o;
  o["kind"] = std::string(to_string(t.outcome));
  if (t.located) {
    o["box"] = rect_to_json(t.located->box);
    o["confidence"] = t.located->confidence;
  }
  if (t.locating_step) o["step"] = *t.locating_step;
  if (!t.root_detections.empty()) {
    o["root_detections"] = Json::array();
    for (const auto& d : t.root_detections) o["root_detections"].push_back(detection_to_json(d));
  }
  j["outcome"] = o;
  j["counters"] = {{"locate_calls", t.counters.locate_calls}, {"cue_calls", t.counters.cue_calls}};
  return j;
}

SearchTrace trace_from_json(const Json& j) {
  SearchTrace t;
  try {
    t.target = j.at("target").get<std::string>();
    t.strategy = j.value("strategy", std::string("guided"));
    t.params = params_from_json(j.at("params"));
    for (const auto& sj : j.at("steps")) {
      SearchStep s;
      s.patch = rect_from_json(sj.at("patch"));
      s.level = sj.at("level").get<int>();
      s.priority = priority_from_json(sj.at("priority"));
      s.insertion_index = sj.value("insertion_index", std::uint64_t{0});
      s.cue_kind = cue_kind_from(sj.at("cue_kind").get<std::string>());
      s.confidence = sj.at("confidence").get<double>();
      for (const auto& cj : sj.at("children"))
        s.children.push_back({rect_from_json(cj.at("patch")), priority_from_json(cj.at("priority"))});
      t.steps.push_back(std::move(s));
    }
    const Json& o = j.at("outcome");
    t.outcome = outcome_from(o.at("kind").get<std::string>());
    if (o.contains("box")) t.located = Detection{rect_from_json(o.at("box")), o.at("confidence").get<double>()};
    if (o.contains("step")) t.locating_step = o.at("step").get<std::size_t>();
    if (o.contains("root_detections"))
      for (const auto& d : o.at("root_detections")) t.root_detections.push_back(detection_from_json(d));
    const Json& c = j.at("counters");
    t.counters.locate_calls = c.at("locate_calls").get<std::uint64_t>();
    t.counters.cue_calls = c.at("cue_calls").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("trace: ") + e.what());
  }
  return t;
}

}  // namespace vstar
