#include "vstar/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vstar/error.hpp"

namespace vstar {

Json rect_to_json(const Rect& r) { return Json::array({r.x, r.y, r.right(), r.bottom()}); }

Rect rect_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw DataError("rect: expected [x1, y1, x2, y2]");
  for (const auto& v : j)
    if (!v.is_number_integer()) throw DataError("rect: coordinates must be integers");
  const Rect r = Rect::from_corners(j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<std::int64_t>(),
                                    j[3].get<std::int64_t>());
  if (!r.valid()) throw DataError("rect: degenerate or negative box");
  return r;
}

Json heatmap_to_json(const Heatmap& h) {
  Json j;
  j["width"] = h.width();
  j["height"] = h.height();
  j["frame"] = rect_to_json(h.frame());
  j["values"] = Json::array();
  for (double v : h.values()) j["values"].push_back(v);
  return j;
}

Heatmap heatmap_from_json(const Json& j) {
  try {
    std::vector<double> values;
    for (const auto& v : j.at("values")) values.push_back(v.get<double>());
    return Heatmap(j.at("width").get<std::size_t>(), j.at("height").get<std::size_t>(),
                   rect_from_json(j.at("frame")), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("heatmap: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
}

Json scene_to_json(const SyntheticScene& s) {
  Json j;
  j["extent"] = rect_to_json(s.extent);
  j["targets"] = Json::array();
  for (const auto& t : s.targets) {
    Json tj;
    tj["name"] = t.name;
    tj["box"] = rect_to_json(t.box);
    tj["detectability"] = t.detectability;
    j["targets"].push_back(tj);
  }
  j["context_regions"] = Json::object();
  for (const auto& [name, region] : s.context_regions) j["context_regions"][name] = rect_to_json(region);
  j["cue_fidelity"] = s.cue_fidelity;
  j["noise_level"] = s.noise_level;
  j["confidence_jitter"] = s.confidence_jitter;
  j["seed"] = s.seed;
  return j;
}

SyntheticScene scene_from_json(const Json& j) {
  SyntheticScene s;
  try {
    s.extent = rect_from_json(j.at("extent"));
    for (const auto& tj : j.at("targets")) {
      PlantedTarget t;
      t.name = tj.at("name").get<std::string>();
      t.box = rect_from_json(tj.at("box"));
      t.detectability = tj.value("detectability", 1.0);
      s.targets.push_back(std::move(t));
    }
    if (j.contains("context_regions"))
      for (const auto& [name, region] : j.at("context_regions").items())
        s.context_regions[name] = rect_from_json(region);
    s.cue_fidelity = j.value("cue_fidelity", 1.0);
    s.noise_level = j.value("noise_level", 0.0);
    s.confidence_jitter = j.value("confidence_jitter", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
    s.validate();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("scene: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  return s;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

void write_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

double json_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw DataError(std::string("missing numeric field ") + key);
  return j.at(key).get<double>();
}

std::string json_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw DataError(std::string("missing string field ") + key);
  return j.at(key).get<std::string>();
}

}  // namespace vstar
