#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace stratforge {

using json = nlohmann::json;

// Canonical serialization: object keys sorted (nlohmann's std::map default),
// 2-space indent, trailing newline. Every artifact file goes through this so
// identical data is byte-identical on disk.
std::string dump_canonical(const json& j);

json parse_json(const std::string& text, const std::string& what);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);  // atomic (tmp + rename)

std::vector<json> read_jsonl_file(const std::string& path);
void write_jsonl_file(const std::string& path, const std::vector<json>& rows);

// Field access with descriptive errors ("mined.jsonl line 3: missing 'message'").
const json& require_field(const json& j, const std::string& key, const std::string& ctx);

} // namespace stratforge
