#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "coflow/model.hpp"

namespace coflow {

// Canonical instance format:
//   { "switch": {"input_capacities": [...], "output_capacities": [...]},
//     "coflows": [ {"id", "weight", "release_time",
//                   "flows": [ {"in", "out", "demand"} ]} ],
//     "kind": "general" | "concurrent-open-shop",
//     "metadata": { string: string }   (optional) }
// Port indices are 0-based. Unknown fields are rejected.

nlohmann::json instance_to_json(const Instance& instance);

/// Parses and validates. Errors carry the JSON path of the offending value.
Instance instance_from_json(const nlohmann::json& doc);

Instance parse_instance(const std::string& text);
std::string dump_instance(const Instance& instance);

Instance read_instance(const std::filesystem::path& path);
void write_instance(const Instance& instance, const std::filesystem::path& path);

}  // namespace coflow
