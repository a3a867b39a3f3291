#pragma once

#include "vstar/json_io.hpp"
#include "vstar/search.hpp"

namespace vstar {

Json params_to_json(const SearchParams& p);
/// Missing fields keep the values already in `base`.
SearchParams params_from_json(const Json& j, SearchParams base = {});

/// {target, params, steps, outcome, counters}; infinite priorities are
/// written as the string "inf".
Json trace_to_json(const SearchTrace& t);
SearchTrace trace_from_json(const Json& j);

}  // namespace vstar
