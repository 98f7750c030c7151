#include "stratforge/miner.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "stratforge/diff.hpp"
#include "stratforge/error.hpp"
#include "stratforge/function_scan.hpp"
#include "stratforge/prompts.hpp"
#include "stratforge/text.hpp"

namespace fs = std::filesystem;

namespace stratforge {

RawCommit RawCommit::from_json(const json& j, const std::string& ctx) {
    RawCommit c;
    c.repo_id = require_field(j, "repo_id", ctx).get<std::string>();
    c.commit_hash = require_field(j, "commit_hash", ctx).get<std::string>();
    c.message = require_field(j, "message", ctx).get<std::string>();
    c.diff = require_field(j, "diff", ctx).get<std::string>();
    if (j.contains("files_before"))
        for (auto it = j.at("files_before").begin(); it != j.at("files_before").end(); ++it)
            c.files_before[it.key()] = it.value().get<std::string>();
    if (j.contains("files_after"))
        for (auto it = j.at("files_after").begin(); it != j.at("files_after").end(); ++it)
            c.files_after[it.key()] = it.value().get<std::string>();
    c.language = j.contains("language")
                     ? language_from_name(j.at("language").get<std::string>())
                     : Language::CPP;
    return c;
}

namespace {

// Old-file line range of the hunk's changed ('-' and ' '-adjacent '+') lines.
// Pure insertions anchor at the insertion point.
std::pair<int, int> changed_old_range(const DiffHunk& h) {
    int line = h.old_start;
    int first = 0, last = 0;
    for (const std::string& bl : h.lines) {
        char op = bl.empty() ? ' ' : bl[0];
        if (op == '\\') continue;
        if (op == '-') {
            if (first == 0) first = line;
            last = line;
        }
        if (op == '+') {
            // insertions sit between old lines; anchor to the preceding one
            int anchor = line > h.old_start ? line - 1 : std::max(1, line);
            if (first == 0) first = anchor;
            last = std::max(last, anchor);
        }
        if (op != '+') ++line;
    }
    if (first == 0) {
        first = h.old_start;
        last = std::max(h.old_start, h.old_start + h.old_count - 1);
    }
    return {first, last};
}

// Function name from a hunk section hint like "int foo(char *s) {".
std::string name_from_section(const std::string& section) {
    size_t paren = section.find('(');
    if (paren == std::string::npos) return "";
    size_t end = paren;
    while (end > 0 && std::isspace(static_cast<unsigned char>(section[end - 1]))) --end;
    size_t begin = end;
    while (begin > 0) {
        char p = section[begin - 1];
        if (std::isalnum(static_cast<unsigned char>(p)) || p == '_' || p == '~') {
            --begin;
            continue;
        }
        if (p == ':' && begin >= 2 && section[begin - 2] == ':') {
            begin -= 2;
            continue;
        }
        break;
    }
    return section.substr(begin, end - begin);
}

} // namespace

std::vector<ChangedFunction> parse_changed_functions(
    const std::string& diff, const std::map<std::string, std::string>& files_before) {
    std::vector<FileDiff> files = parse_unified_diff(diff);
    std::vector<ChangedFunction> out;
    // key: file + function; merge hunk ranges per function
    std::map<std::pair<std::string, std::string>, size_t> index;

    for (const FileDiff& fd : files) {
        std::string path = fd.old_path.empty() ? fd.new_path : fd.old_path;
        std::vector<FunctionSpan> spans;
        auto fit = files_before.find(path);
        if (fit != files_before.end()) spans = scan_functions(fit->second);

        for (const DiffHunk& h : fd.hunks) {
            auto [lo, hi] = changed_old_range(h);
            std::string fn;
            if (!spans.empty()) {
                fn = function_at_line(spans, lo);
                if (fn.empty()) fn = function_at_line(spans, hi);
            }
            if (fn.empty()) fn = name_from_section(h.section);
            auto key = std::make_pair(path, fn);
            auto it = index.find(key);
            if (it == index.end()) {
                index[key] = out.size();
                out.push_back({path, fn, lo, hi});
            } else {
                ChangedFunction& cf = out[it->second];
                cf.start_line = std::min(cf.start_line, lo);
                cf.end_line = std::max(cf.end_line, hi);
            }
        }
    }
    return out;
}

bool is_optimization_candidate(const std::string& message,
                               const std::vector<std::string>& keywords) {
    for (const std::string& kw : keywords)
        if (contains_word_ci(message, kw)) return true;
    return false;
}

const std::vector<std::string>& default_keywords() {
    static const std::vector<std::string> kws = {
        "optimize",  "optimization",    "speed up",   "speedup", "faster",
        "performance", "perf", "reduce overhead", "avoid copy", "cache",
    };
    return kws;
}

bool llm_verify_optimization(const RawCommit& commit, CompletionProvider& provider) {
    std::string answer = provider.complete(verify_prompt(commit.message, commit.diff));
    std::string first;
    for (char c : trim(answer)) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            first.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        else
            break;
    }
    if (first == "YES") return true;
    if (first == "NO") return false;
    log_warn("llm_verify: unparseable answer for " + commit.commit_hash + " (counted as NO): " +
             answer.substr(0, 80));
    return false;
}

std::vector<CommitRecord> dedupe(const std::vector<CommitRecord>& commits) {
    std::set<std::string> seen_messages;
    std::set<std::string> seen_diffs;
    std::vector<CommitRecord> out;
    for (const CommitRecord& c : commits) {
        std::string m = normalize_for_dedupe(c.message);
        std::string d = normalize_for_dedupe(c.diff);
        if (seen_messages.count(m) || seen_diffs.count(d)) continue;
        seen_messages.insert(m);
        seen_diffs.insert(d);
        out.push_back(c);
    }
    return out;
}

std::vector<CommitRecord> mine_corpus(const std::vector<RawCommit>& corpus,
                                      const std::vector<std::string>& keywords,
                                      CompletionProvider* verifier, MineStats* stats) {
    MineStats local;
    local.total = static_cast<int>(corpus.size());
    std::vector<CommitRecord> records;

    for (const RawCommit& raw : corpus) {
        if (!is_optimization_candidate(raw.message, keywords)) continue;
        ++local.keyword_matched;

        std::vector<ChangedFunction> changed;
        try {
            changed = parse_changed_functions(raw.diff, raw.files_before);
        } catch (const ParseError& e) {
            log_warn("miner: skipping " + raw.commit_hash + ": " + e.what());
            continue;
        }
        if (changed.size() != 1) continue;
        ++local.single_function;

        if (verifier) {
            if (!llm_verify_optimization(raw, *verifier)) continue;
            ++local.llm_verified;
        }

        const ChangedFunction& cf = changed[0];
        auto before_it = raw.files_before.find(cf.file_path);
        auto after_it = raw.files_after.find(cf.file_path);
        if (before_it == raw.files_before.end() || after_it == raw.files_after.end()) {
            log_warn("miner: " + raw.commit_hash + " lacks file contents for " + cf.file_path);
            continue;
        }

        std::vector<FunctionSpan> before_spans = scan_functions(before_it->second);
        std::vector<FunctionSpan> after_spans = scan_functions(after_it->second);
        const FunctionSpan* before_span = nullptr;
        const FunctionSpan* after_span = nullptr;
        for (const FunctionSpan& s : before_spans)
            if (s.name == cf.function_name) before_span = &s;
        for (const FunctionSpan& s : after_spans)
            if (s.name == cf.function_name) after_span = &s;
        if (!before_span || !after_span) {
            log_warn("miner: " + raw.commit_hash + ": cannot locate function '" +
                     cf.function_name + "' in both file versions");
            continue;
        }

        CommitRecord rec;
        rec.repo_id = raw.repo_id;
        rec.commit_hash = raw.commit_hash;
        rec.message = raw.message;
        rec.function_name = cf.function_name;
        rec.language = raw.language;
        rec.code_before =
            slice_lines(before_it->second, before_span->start_line, before_span->end_line);
        rec.code_after =
            slice_lines(after_it->second, after_span->start_line, after_span->end_line);
        if (rec.code_before == rec.code_after) continue;  // change was outside the body
        rec.diff = make_unified_diff(rec.code_before, rec.code_after, cf.file_path, cf.file_path);
        try {
            rec.validate();
        } catch (const Error& e) {
            log_warn(std::string("miner: dropping invalid record: ") + e.what());
            continue;
        }
        records.push_back(std::move(rec));
    }

    std::vector<CommitRecord> result = dedupe(records);
    local.after_dedupe = static_cast<int>(result.size());
    if (stats) *stats = local;
    return result;
}

std::vector<RawCommit> load_corpus(const std::string& corpus_dir) {
    if (!fs::is_directory(corpus_dir)) throw IoError("corpus is not a directory: " + corpus_dir);
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(corpus_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    std::vector<RawCommit> corpus;
    for (const std::string& p : paths)
        for (const json& j : read_jsonl_file(p)) corpus.push_back(RawCommit::from_json(j, p));
    return corpus;
}

} // namespace stratforge
