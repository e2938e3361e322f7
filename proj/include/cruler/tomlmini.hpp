#pragma once

#include <string>

#include <json.hpp>

namespace cruler {

// Minimal TOML reader covering the subset the run configurations use:
// comments, [table] and [[array-of-table]] headers, bare/quoted keys,
// strings, integers, floats, booleans, homogeneous-or-not arrays, and
// inline tables. Dates and multiline strings are not supported. The
// result is a JSON object tree, so TOML and JSON configs share one loader.
nlohmann::json parse_toml(const std::string& text);

} // namespace cruler
