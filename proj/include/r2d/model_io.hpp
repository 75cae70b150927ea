#pragma once

#include "r2d/model.hpp"

#include <json.hpp>

#include <string>

namespace r2d {

using json = nlohmann::json;

/// Model spec file parsed, validated and fingerprinted. `canonical` is the
/// normalized re-serialization that the fingerprint hashes, so formatting
/// and key order in the input file do not matter.
struct ParsedModel {
    ModelHandle model;
    FiberMeasureSystem measure;
    json canonical;
    std::string fingerprint;  // fnv1a64 hex of the canonical dump
};

ParsedModel parse_model_json(const json& j);
ParsedModel parse_model_spec(const std::string& path);

std::uint64_t fnv1a64(const std::string& data);
std::string fingerprint_of(const json& j);

} // namespace r2d
