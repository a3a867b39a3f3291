#include "vstar/wire.hpp"

#include <cmath>

#include "vstar/error.hpp"

namespace vstar::wire {

namespace {

constexpr std::string_view kLocatePrefix = "Please locate the ";
constexpr std::string_view kLocateSuffix = " in the image.";
constexpr std::string_view kCuePrefix = "What is the most likely location of the ";
constexpr std::string_view kCueSuffix = " in the image?";

std::optional<std::string> strip(std::string_view text, std::string_view prefix, std::string_view suffix) {
  if (text.size() <= prefix.size() + suffix.size() || !text.starts_with(prefix) || !text.ends_with(suffix))
    return std::nullopt;
  return std::string(text.substr(prefix.size(), text.size() - prefix.size() - suffix.size()));
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string locate_instruction(std::string_view target) {
  return std::string(kLocatePrefix) + std::string(target) + std::string(kLocateSuffix);
}

std::string cue_instruction(std::string_view target) {
  return std::string(kCuePrefix) + std::string(target) + std::string(kCueSuffix);
}

std::optional<std::string> parse_locate_instruction(std::string_view instruction) {
  return strip(instruction, kLocatePrefix, kLocateSuffix);
}

std::optional<std::string> parse_cue_instruction(std::string_view instruction) {
  return strip(instruction, kCuePrefix, kCueSuffix);
}

Json encode(const LocateRequest& m) {
  Json j;
  j["image"] = m.image ? Json(*m.image) : Json(nullptr);
  j["patch"] = rect_to_json(m.patch);
  j["instruction"] = m.instruction;
  return j;
}

Json encode(const LocateResponse& m) {
  Json j;
  j["box"] = m.box ? rect_to_json(*m.box) : Json(nullptr);
  j["confidence"] = m.confidence;
  Json h;
  h["width"] = m.heatmap.width;
  h["height"] = m.heatmap.height;
  h["values"] = m.heatmap.values;
  j["heatmap"] = std::move(h);
  return j;
}

Json encode(const CueRequest& m) {
  Json j;
  j["patch"] = rect_to_json(m.patch);
  j["instruction"] = m.instruction;
  return j;
}

Json encode(const CueResponse& m) {
  Json j;
  j["text"] = m.text;
  return j;
}

LocateRequest decode_locate_request(const Json& j) {
  return guarded("locate request", [&] {
    LocateRequest m;
    const Json& image = j.at("image");
    if (!image.is_null()) m.image = image.get<std::string>();
    m.patch = rect_from_json(j.at("patch"));
    m.instruction = j.at("instruction").get<std::string>();
    return m;
  });
}

LocateResponse decode_locate_response(const Json& j) {
  return guarded("locate response", [&] {
    LocateResponse m;
    const Json& box = j.at("box");
    if (!box.is_null()) m.box = rect_from_json(box);
    m.confidence = j.at("confidence").get<double>();
    if (!(m.confidence >= 0.0 && m.confidence <= 1.0)) throw DataError("locate response: confidence outside [0, 1]");
    const Json& h = j.at("heatmap");
    m.heatmap.width = h.at("width").get<std::size_t>();
    m.heatmap.height = h.at("height").get<std::size_t>();
    m.heatmap.values = h.at("values").get<std::vector<double>>();
    if (m.heatmap.values.size() != m.heatmap.width * m.heatmap.height || m.heatmap.values.empty())
      throw DataError("locate response: heatmap size mismatch");
    for (double v : m.heatmap.values)
      if (!std::isfinite(v)) throw DataError("locate response: non-finite heatmap value");
    return m;
  });
}

CueRequest decode_cue_request(const Json& j) {
  return guarded("cue request", [&] {
    CueRequest m;
    m.patch = rect_from_json(j.at("patch"));
    m.instruction = j.at("instruction").get<std::string>();
    return m;
  });
}

CueResponse decode_cue_response(const Json& j) {
  return guarded("cue response", [&] { return CueResponse{j.at("text").get<std::string>()}; });
}

}  // namespace vstar::wire
