#pragma once

#include <string>
#include <vector>

namespace stratforge {

struct DiffHunk {
    int old_start = 0;  // 1-based; 0 for empty side
    int old_count = 0;
    int new_start = 0;
    int new_count = 0;
    std::string section;  // text after the second @@ (the enclosing-context hint)
    std::vector<std::string> lines;  // each begins with ' ', '-', '+', or '\'
};

struct FileDiff {
    std::string old_path;  // without the a/ b/ prefixes
    std::string new_path;
    std::vector<DiffHunk> hunks;
};

// Minimal Myers diff producing a standard unified diff with --- / +++ headers
// and `\ No newline at end of file` markers. Equal inputs yield "".
std::string make_unified_diff(const std::string& before, const std::string& after,
                              const std::string& old_path = "a", const std::string& new_path = "b",
                              int context = 3);

std::vector<FileDiff> parse_unified_diff(const std::string& diff);  // throws ParseError

// Apply a single-file unified diff. Context and deletion lines must match the
// original exactly; a mismatch throws ParseError naming the hunk line.
std::string apply_unified_diff(const std::string& original, const std::string& diff);

} // namespace stratforge
