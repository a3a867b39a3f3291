#pragma once

// HTTP + JSON protocol spoken with a remote visual search model.
//
//   POST /v1/locate  {image, patch, instruction} -> {box, confidence, heatmap}
//   POST /v1/cue     {patch, instruction}        -> {text}

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vstar/geometry.hpp"
#include "vstar/json_io.hpp"

namespace vstar::wire {

inline constexpr std::string_view kLocatePath = "/v1/locate";
inline constexpr std::string_view kCuePath = "/v1/cue";

/// "Please locate the <s> in the image."
std::string locate_instruction(std::string_view target);
/// "What is the most likely location of the <s> in the image?"
std::string cue_instruction(std::string_view target);

/// Inverse of the two builders above; nullopt when the text does not match.
std::optional<std::string> parse_locate_instruction(std::string_view instruction);
std::optional<std::string> parse_cue_instruction(std::string_view instruction);

struct LocateRequest {
  std::optional<std::string> image;  // encoded patch pixels
  Rect patch;
  std::string instruction;
  friend bool operator==(const LocateRequest&, const LocateRequest&) = default;
};

struct WireHeatmap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;
  friend bool operator==(const WireHeatmap&, const WireHeatmap&) = default;
};

struct LocateResponse {
  std::optional<Rect> box;
  double confidence = 0.0;
  WireHeatmap heatmap;
  friend bool operator==(const LocateResponse&, const LocateResponse&) = default;
};

struct CueRequest {
  Rect patch;
  std::string instruction;
  friend bool operator==(const CueRequest&, const CueRequest&) = default;
};

struct CueResponse {
  std::string text;
  friend bool operator==(const CueResponse&, const CueResponse&) = default;
};

// All decoders throw DataError on malformed messages.
Json encode(const LocateRequest& m);
Json encode(const LocateResponse& m);
Json encode(const CueRequest& m);
Json encode(const CueResponse& m);
LocateRequest decode_locate_request(const Json& j);
LocateResponse decode_locate_response(const Json& j);
CueRequest decode_cue_request(const Json& j);
CueResponse decode_cue_response(const Json& j);

}  // namespace vstar::wire
