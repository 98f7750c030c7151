#include "stratforge/json_io.hpp"

#include "stratforge/error.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

std::string dump_canonical(const json& j) {
    return j.dump(2) + "\n";
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": invalid JSON: " + e.what(), 1);
    }
}

json read_json_file(const std::string& path) {
    return parse_json(read_text_file(path), path);
}

void write_json_file(const std::string& path, const json& j) {
    write_text_file_atomic(path, dump_canonical(j));
}

std::vector<json> read_jsonl_file(const std::string& path) {
    std::vector<json> rows;
    int lineno = 0;
    for (const std::string& line : split_lines(read_text_file(path))) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ParseError(path + ": invalid JSON line: " + e.what(), lineno);
        }
    }
    return rows;
}

void write_jsonl_file(const std::string& path, const std::vector<json>& rows) {
    std::string out;
    for (const json& r : rows) {
        out += r.dump();  // one line per record, keys sorted
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

const json& require_field(const json& j, const std::string& key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ctx + ": missing '" + key + "'");
    return *it;
}

} // namespace stratforge
