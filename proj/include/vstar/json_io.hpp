#pragma once

// JSON conversions shared by trace files, scene files and the wire protocol.
// Objects use nlohmann::ordered_json so field order is deterministic.

#include <string>

#include "json.hpp"
#include "vstar/geometry.hpp"
#include "vstar/heatmap.hpp"
#include "vstar/perception.hpp"

namespace vstar {

using Json = nlohmann::ordered_json;

/// [x1, y1, x2, y2]
Json rect_to_json(const Rect& r);
/// Throws DataError unless `j` is four integers with x2 > x1, y2 > y1.
Rect rect_from_json(const Json& j);

Json heatmap_to_json(const Heatmap& h);
Heatmap heatmap_from_json(const Json& j);

Json scene_to_json(const SyntheticScene& s);
SyntheticScene scene_from_json(const Json& j);

/// Reads and parses a JSON file; throws DataError on I/O or syntax errors.
Json read_json_file(const std::string& path);
/// Writes `j` pretty-printed with a trailing newline.
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& text);

/// Typed field access that reports missing or mistyped keys as DataError.
double json_number(const Json& j, const char* key);
std::string json_string(const Json& j, const char* key);

}  // namespace vstar
