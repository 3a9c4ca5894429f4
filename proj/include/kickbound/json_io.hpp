#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace kickbound::json_io {

using Json = nlohmann::ordered_json;

/// Rounds to `digits` significant decimal digits (the printed precision).
double round_sig(double x, int digits = 12);

/// A rounded number, or null when x is not finite.
Json number(double x);
Json number(const std::optional<double>& x);

/// Rounds every floating-point leaf in place.
void round_all(Json& j);

/// {"command": ..., "result": ..., "meta": {...}}; meta is omitted when
/// with_meta is false so that output is byte-stable across runs.
Json envelope(const std::string& command, Json result, bool with_meta);

std::string dump(const Json& j);

}  // namespace kickbound::json_io
