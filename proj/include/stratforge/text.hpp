#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratforge {

std::string to_lower(std::string_view s);
std::string strip_all_whitespace(std::string_view s);
std::string trim(std::string_view s);

// Lowercase + remove every whitespace character. Shared by the miner's
// duplicate detection for both messages and diffs.
std::string normalize_for_dedupe(std::string_view s);

// Split on '\n'. "a\nb\n" -> {"a", "b"}; "a\nb" -> {"a", "b"}; "" -> {}.
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);

// Whole-word, case-insensitive phrase match. Word boundaries are transitions
// between [A-Za-z0-9_] and anything else, so "perf" does not match "performant"
// but "speed up" matches across the space.
bool contains_word_ci(std::string_view haystack, std::string_view phrase);

// "1: first\n2: second\n..." — 1-based annotations for optimization prompts.
std::string number_lines(std::string_view code);

struct FencedBlock {
    std::string info;  // text after the opening fence, e.g. "yaml"
    std::string body;
};

// All ``` fenced blocks in order of appearance. An unterminated fence runs to
// end of input.
std::vector<FencedBlock> extract_fenced_blocks(std::string_view text);

// First fenced block whose info string equals `lang` (or any block if lang is
// empty). nullopt if none.
std::optional<std::string> extract_fenced_block(std::string_view text, std::string_view lang);

// Remove every fenced block tagged `lang` from text (used to enforce the
// no-rules-in-analysis contract). Returns the stripped text and whether
// anything was removed.
std::pair<std::string, bool> strip_fenced_blocks(std::string_view text, std::string_view lang);

std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, std::string_view content);

} // namespace stratforge
