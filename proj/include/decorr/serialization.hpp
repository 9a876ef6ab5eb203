#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decorr/distribution.hpp"
#include "decorr/schema.hpp"

namespace decorr {

inline constexpr const char* kJointFormat = "decorr-joint/1";
inline constexpr const char* kToolVersion = "0.1.0";

// Schema config document:
//   {"variables": [{"name": "...", "role": "outcome|unprotected|protected",
//                   "levels": ["...", ...]}, ...]}
// Unknown top-level keys (e.g. "manifest") are ignored on read.
nlohmann::json schema_to_json(const VariableSchema& schema);
VariableSchema schema_from_json(const nlohmann::json& doc);

// Joint document: format tag, schema block, shape [|S|, |U|, |W|] and a dense
// row-major probability list over (s, u, w). Doubles are written with the
// shortest representation that round-trips exactly.
nlohmann::json joint_to_json(const JointDistribution& dist);
JointDistribution joint_from_json(const nlohmann::json& doc);

// Parameters of a CLI run, embedded verbatim in every artifact it writes.
struct RunManifest {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    nlohmann::json parameters = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    std::string tool_version = kToolVersion;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

nlohmann::json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

// Writes each (path, contents) pair to a sibling temporary file first and only
// renames into place once every temporary has been written.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

std::string dump_json(const nlohmann::json& doc);

}  // namespace decorr
