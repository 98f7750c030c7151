#include "stratforge/text.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stratforge/error.hpp"

namespace stratforge {

namespace {
bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
} // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = lower(c);
    return out;
}

std::string strip_all_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string normalize_for_dedupe(std::string_view s) {
    return strip_all_whitespace(to_lower(s));
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t nl = s.find('\n', pos);
        if (nl == std::string_view::npos) {
            out.emplace_back(s.substr(pos));
            break;
        }
        out.emplace_back(s.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    if (haystack.size() < needle.size()) return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        size_t j = 0;
        while (j < needle.size() && lower(haystack[i + j]) == lower(needle[j])) ++j;
        if (j == needle.size()) return true;
    }
    return false;
}

bool contains_word_ci(std::string_view haystack, std::string_view phrase) {
    if (phrase.empty()) return false;
    for (size_t i = 0; i + phrase.size() <= haystack.size(); ++i) {
        size_t j = 0;
        while (j < phrase.size() && lower(haystack[i + j]) == lower(phrase[j])) ++j;
        if (j != phrase.size()) continue;
        bool left_ok = i == 0 || !is_word_char(haystack[i - 1]) || !is_word_char(phrase[0]);
        size_t end = i + phrase.size();
        bool right_ok = end == haystack.size() || !is_word_char(haystack[end]) ||
                        !is_word_char(phrase.back());
        if (left_ok && right_ok) return true;
    }
    return false;
}

std::string number_lines(std::string_view code) {
    std::string out;
    int n = 1;
    for (const std::string& line : split_lines(code)) {
        out += std::to_string(n++);
        out += ": ";
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<FencedBlock> extract_fenced_blocks(std::string_view text) {
    std::vector<FencedBlock> blocks;
    std::vector<std::string> lines = split_lines(text);
    size_t i = 0;
    while (i < lines.size()) {
        std::string t = trim(lines[i]);
        if (!starts_with(t, "```")) {
            ++i;
            continue;
        }
        FencedBlock b;
        b.info = trim(t.substr(3));
        ++i;
        std::string body;
        bool closed = false;
        while (i < lines.size()) {
            if (trim(lines[i]) == "```") {
                closed = true;
                ++i;
                break;
            }
            body += lines[i];
            body += '\n';
            ++i;
        }
        (void)closed;  // unterminated fences run to EOF by design
        b.body = body;
        blocks.push_back(std::move(b));
    }
    return blocks;
}

std::optional<std::string> extract_fenced_block(std::string_view text, std::string_view lang) {
    for (const FencedBlock& b : extract_fenced_blocks(text))
        if (lang.empty() || b.info == lang) return b.body;
    return std::nullopt;
}

std::pair<std::string, bool> strip_fenced_blocks(std::string_view text, std::string_view lang) {
    std::vector<std::string> lines = split_lines(text);
    std::string out;
    bool removed = false;
    size_t i = 0;
    while (i < lines.size()) {
        std::string t = trim(lines[i]);
        if (starts_with(t, "```") && (lang.empty() || trim(t.substr(3)) == lang)) {
            removed = true;
            ++i;
            while (i < lines.size() && trim(lines[i]) != "```") ++i;
            if (i < lines.size()) ++i;  // closing fence
            continue;
        }
        out += lines[i];
        out += '\n';
        ++i;
    }
    if (!removed) return {std::string(text), false};  // don't touch line endings on a no-op
    return {out, removed};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file_atomic(const std::string& path, std::string_view content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp + " -> " + path + ": " + ec.message());
}

} // namespace stratforge
