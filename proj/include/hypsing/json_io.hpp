#pragma once

// JSON forms of series, isometries, developing maps, metrics, reports and
// verification tables. Parsing failures throw Error with ErrorKind::Parse.

#include <string>

#include <json.hpp>

#include "hypsing/classify.hpp"
#include "hypsing/verify_suite.hpp"

namespace hypsing {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Json to_json(const TruncatedSeries& s);
Json to_json(const MobiusTransform& m);
Json to_json(const IsometryClass& c);
/// {"kind": "power"|"log"|"series", ...}; "post", "target", "rotate" and
/// "branch" appear only when they differ from the defaults.
Json to_json(const DevelopingMapSpec& f);
Json to_json(const ConformalMetric& m);
Json to_json(const SingularityReport& r);
Json to_json(const SuiteReport& r);

Complex complex_from_json(const Json& j);
TruncatedSeries series_from_json(const Json& j);
MobiusTransform mobius_from_json(const Json& j);
Model model_from_json(const Json& j);
/// "post" acts on the core's model when its matrix is written in that model,
/// otherwise after the Cayley map; in the latter case it also sets the
/// target unless "target" says otherwise.
DevelopingMapSpec map_from_json(const Json& j);
ConformalMetric metric_from_json(const Json& j);

/// Parses text, mapping syntax errors to ErrorKind::Parse.
Json parse_json(const std::string& text);

/// Two-space indented dump with a trailing newline.
std::string dump_json(const Json& j);

}  // namespace hypsing
