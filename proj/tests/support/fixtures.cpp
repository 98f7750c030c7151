#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "stratforge/diff.hpp"
#include "stratforge/hash.hpp"
#include "stratforge/prompts.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace stratforge::testing {

std::string fake_hash(int n) {
    return sha256_hex("fixture-commit-" + std::to_string(n)).substr(0, 40);
}

CommitRecord make_commit(const std::string& repo, int hash_n, const std::string& message,
                         const std::string& function_name, const std::string& code_before,
                         const std::string& code_after) {
    CommitRecord c;
    c.repo_id = repo;
    c.commit_hash = fake_hash(hash_n);
    c.message = message;
    c.function_name = function_name;
    c.code_before = code_before;
    c.code_after = code_after;
    std::string path = "src/" + function_name + ".cpp";
    c.diff = make_unified_diff(code_before, code_after, path, path);
    c.validate();
    return c;
}

ReplayScript& ReplayScript::embedder(const std::string& id, int dim) {
    embedder_id_ = id;
    dim_ = dim;
    return *this;
}

ReplayScript& ReplayScript::completion(const std::string& prompt, const std::string& response) {
    completions_[sha256_hex(prompt)] = response;
    return *this;
}

ReplayScript& ReplayScript::completion_list(const std::string& prompt,
                                            const std::vector<std::string>& responses) {
    json arr = json::array();
    for (const std::string& r : responses) arr.push_back(r);
    completions_[sha256_hex(prompt)] = arr;
    return *this;
}

ReplayScript& ReplayScript::embedding(const std::string& text, const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    embeddings_[sha256_hex(text)] = arr;
    return *this;
}

json ReplayScript::to_json() const {
    return json{{"embedder", json{{"id", embedder_id_}, {"dimension", dim_}}},
                {"completions", completions_},
                {"embeddings", embeddings_}};
}

std::string ReplayScript::write(const std::string& path) const {
    write_file(path, to_json().dump(2) + "\n");
    return path;
}

namespace {

RawCommit raw_entry(const std::string& repo, int hash_n, const std::string& message,
                    const std::string& path, const std::string& before,
                    const std::string& after) {
    RawCommit r;
    r.repo_id = repo;
    r.commit_hash = fake_hash(hash_n);
    r.message = message;
    r.diff = make_unified_diff(before, after, "a/" + path, "b/" + path);
    r.files_before[path] = before;
    r.files_after[path] = after;
    r.language = Language::CPP;
    return r;
}

json raw_to_json(const RawCommit& r) {
    json fb = json::object(), fa = json::object();
    for (const auto& [k, v] : r.files_before) fb[k] = v;
    for (const auto& [k, v] : r.files_after) fa[k] = v;
    return json{{"repo_id", r.repo_id},       {"commit_hash", r.commit_hash},
                {"message", r.message},       {"diff", r.diff},
                {"files_before", fb},         {"files_after", fa},
                {"language", language_name(r.language)}};
}

// if (<expensive call> && <cheap flag>), swapped by the commit
std::string swap_file(const std::string& fn, const std::string& call, bool swapped) {
    std::string cond = swapped ? "r.flag && " + call + "(r)" : call + "(r) && r.flag";
    return "#include \"records.h\"\n"
           "\n"
           "int " + fn + "(const record& r) {\n"
           "    if (" + cond + ") {\n"
           "        return 1;\n"
           "    }\n"
           "    return 0;\n"
           "}\n";
}

// strlen evaluated in the loop condition, hoisted by the commit
std::string hoist_file(const std::string& fn, const std::string& ch, bool hoisted) {
    std::string body;
    if (hoisted) {
        body = "    size_t len = strlen(s);\n"
               "    for (size_t i = 0; i < len; i++) {\n";
    } else {
        body = "    for (size_t i = 0; i < strlen(s); i++) {\n";
    }
    return "#include <string.h>\n"
           "\n"
           "size_t " + fn + "(const char* s) {\n"
           "    size_t n = 0;\n" +
           body +
           "        if (s[i] == '" + ch + "') n++;\n"
           "    }\n"
           "    return n;\n"
           "}\n";
}

const char* kYamlSwap =
    "rules:\n"
    "  - id: hoist-cheap-conjunct\n"
    "    languages:\n"
    "      - cpp\n"
    "    severity: WARNING\n"
    "    message: expensive call evaluated before a cheap flag test in a conjunction\n"
    "    pattern: |\n"
    "      if ($F($R) && $R.flag)\n";

const char* kYamlHoist =
    "rules:\n"
    "  - id: strlen-in-loop-condition\n"
    "    languages:\n"
    "      - cpp\n"
    "    severity: WARNING\n"
    "    message: strlen is re-evaluated on every loop iteration\n"
    "    pattern: |\n"
    "      for (...; $I < strlen($S); ...)\n";

const char* kAnalysisSwap =
    "The pre-optimization pattern evaluates an expensive validation call on the left side "
    "of a conjunction whose right side is a cheap boolean field test. Reordering the "
    "operands lets short-circuit evaluation skip the expensive call whenever the flag is "
    "false, which is the entire speedup. The pattern to detect is an if condition of the "
    "form expensive-call && cheap-field-test.";

const char* kAnalysisHoist =
    "The loop condition calls strlen on every iteration even though the string does not "
    "change inside the loop, so the scan is quadratic in the string length. The fix hoists "
    "the strlen call into a local variable before the loop. The pattern to detect is a for "
    "loop whose condition compares the induction variable against strlen of a "
    "loop-invariant string.";

} // namespace

FixtureCorpus make_fixture_corpus() {
    FixtureCorpus fc;
    fc.summary_swap =
        "Reorder a compound conditional so the cheap flag test runs before the expensive "
        "validation call.";
    fc.summary_hoist =
        "Hoist a loop-invariant strlen call out of the loop condition into a local "
        "variable.";
    fc.summary_noise = {
        "Reserve vector capacity before a push_back loop to avoid repeated reallocation.",
        "Hoist the container size lookup out of the loop header into a local.",
        "Replace pow with explicit multiplication for a small integer exponent.",
    };
    fc.rule_pattern_swap = "if ($F($R) && $R.flag)";
    fc.rule_pattern_hoist = "for (...; $I < strlen($S); ...)";

    struct SwapSpec { const char* fn; const char* call; const char* msg; const char* repo; };
    const SwapSpec swaps[] = {
        {"check_order", "expensive_validate", "Speed up order checks by testing the flag first",
         "repo/alpha"},
        {"check_user", "deep_verify", "check_user: reorder condition for performance",
         "repo/alpha"},
        {"check_packet", "full_scan", "Optimize packet check to short-circuit early",
         "repo/alpha"},
        {"check_job", "slow_audit", "Faster job check: cheap flag test first", "repo/beta"},
        {"check_frame", "heavy_probe", "Reduce overhead in frame checks by reordering the "
                                       "conjunction",
         "repo/beta"},
    };
    struct HoistSpec { const char* fn; const char* ch; const char* msg; const char* repo; };
    const HoistSpec hoists[] = {
        {"count_spaces", " ", "Hoist strlen out of the loop for a big speedup", "repo/beta"},
        {"count_tabs", "\\t", "count_tabs: avoid quadratic scanning, cache the string length",
         "repo/gamma"},
        {"count_dots", ".", "Improve perf of count_dots by hoisting strlen", "repo/gamma"},
        {"count_commas", ",", "Optimization: stop calling strlen every iteration",
         "repo/gamma"},
    };

    int h = 0;
    // A0 first, then its duplicate-message twin so dedupe keeps A0.
    fc.raw.push_back(raw_entry(swaps[0].repo, h++, swaps[0].msg, "src/checks.cpp",
                               swap_file(swaps[0].fn, swaps[0].call, false),
                               swap_file(swaps[0].fn, swaps[0].call, true)));
    fc.raw.push_back(raw_entry("repo/delta", h++, swaps[0].msg, "src/dup.cpp",
                               hoist_file("count_bytes", "x", false),
                               hoist_file("count_bytes", "x", true)));
    for (int i = 1; i < 5; ++i)
        fc.raw.push_back(raw_entry(swaps[i].repo, h++, swaps[i].msg, "src/checks.cpp",
                                   swap_file(swaps[i].fn, swaps[i].call, false),
                                   swap_file(swaps[i].fn, swaps[i].call, true)));
    for (const HoistSpec& s : hoists)
        fc.raw.push_back(raw_entry(s.repo, h++, s.msg, "src/count.cpp",
                                   hoist_file(s.fn, s.ch, false), hoist_file(s.fn, s.ch, true)));

    // the three one-off strategies
    fc.raw.push_back(raw_entry(
        "repo/alpha", h++, "Avoid copy storms by reserving vector capacity up front",
        "src/collect.cpp",
        "#include <vector>\n\nstd::vector<int> collect_ids(const item* items, size_t count) {\n"
        "    std::vector<int> out;\n"
        "    for (size_t i = 0; i < count; i++) {\n"
        "        out.push_back(items[i].id);\n"
        "    }\n"
        "    return out;\n"
        "}\n",
        "#include <vector>\n\nstd::vector<int> collect_ids(const item* items, size_t count) {\n"
        "    std::vector<int> out;\n"
        "    out.reserve(count);\n"
        "    for (size_t i = 0; i < count; i++) {\n"
        "        out.push_back(items[i].id);\n"
        "    }\n"
        "    return out;\n"
        "}\n"));
    fc.raw.push_back(raw_entry(
        "repo/beta", h++, "Cache the key count outside the hot loop", "src/weight.cpp",
        "#include \"weights.h\"\n\nint total_weight(const table& w, const keylist& keys) {\n"
        "    int total = 0;\n"
        "    for (size_t i = 0; i < keys.size(); i++) {\n"
        "        total += w.at(keys[i]);\n"
        "    }\n"
        "    return total;\n"
        "}\n",
        "#include \"weights.h\"\n\nint total_weight(const table& w, const keylist& keys) {\n"
        "    int total = 0;\n"
        "    const size_t n = keys.size();\n"
        "    for (size_t i = 0; i < n; i++) {\n"
        "        total += w.at(keys[i]);\n"
        "    }\n"
        "    return total;\n"
        "}\n"));
    fc.raw.push_back(raw_entry(
        "repo/gamma", h++, "Speed up distance computation by dropping pow", "src/dist.cpp",
        "#include <math.h>\n\ndouble dist2(double x0, double y0, double x1, double y1) {\n"
        "    return pow(x1 - x0, 2) + pow(y1 - y0, 2);\n"
        "}\n",
        "#include <math.h>\n\ndouble dist2(double x0, double y0, double x1, double y1) {\n"
        "    double dx = x1 - x0;\n"
        "    double dy = y1 - y0;\n"
        "    return dx * dx + dy * dy;\n"
        "}\n"));

    // rejected: no optimization keyword in the message
    fc.raw.push_back(raw_entry(
        "repo/alpha", h++, "Fix null pointer dereference in parser", "src/parse.cpp",
        "#include \"parse.h\"\n\nint parse_count(const char* s) {\n"
        "    return s[0] - '0';\n"
        "}\n",
        "#include \"parse.h\"\n\nint parse_count(const char* s) {\n"
        "    if (!s) return 0;\n"
        "    return s[0] - '0';\n"
        "}\n"));

    // rejected: the diff touches two functions
    {
        std::string before =
            "#include \"io.h\"\n\nint read_header(stream* s) {\n"
            "    int a = s->next;\n    int b = s->next;\n    int c = s->next;\n"
            "    int d = s->next;\n    int e = s->next;\n    int f = s->next;\n"
            "    return a + b + c + d + e + f;\n}\n\n"
            "int read_footer(stream* s) {\n"
            "    int x = s->next;\n    int y = s->next;\n    return x + y;\n}\n";
        std::string after =
            "#include \"io.h\"\n\nint read_header(stream* s) {\n"
            "    int a = s->peek;\n    int b = s->next;\n    int c = s->next;\n"
            "    int d = s->next;\n    int e = s->next;\n    int f = s->next;\n"
            "    return a + b + c + d + e + f;\n}\n\n"
            "int read_footer(stream* s) {\n"
            "    int x = s->peek;\n    int y = s->next;\n    return x + y;\n}\n";
        fc.raw.push_back(raw_entry("repo/beta", h++, "Optimize both readers", "src/io.cpp",
                                   before, after));
    }

    // rejected: keyword hit but the verifier answers NO
    fc.raw.push_back(raw_entry(
        "repo/gamma", h++, "Rename perf counters", "src/counters.cpp",
        "#include \"counters.h\"\n\nint bump(counters* c) {\n"
        "    int old_total = c->total;\n"
        "    c->total = old_total + 1;\n"
        "    return old_total;\n"
        "}\n",
        "#include \"counters.h\"\n\nint bump(counters* c) {\n"
        "    int prev_total = c->total;\n"
        "    c->total = prev_total + 1;\n"
        "    return prev_total;\n"
        "}\n"));

    // Expected survivors: run the real miner on everything except the
    // verifier-rejected entry (hash index h-1), without a verifier.
    std::vector<RawCommit> would_pass;
    for (const RawCommit& r : fc.raw)
        if (r.commit_hash != fake_hash(h - 1)) would_pass.push_back(r);
    fc.mined = mine_corpus(would_pass, default_keywords(), nullptr, nullptr);

    for (int i = 0; i < 5; ++i)
        fc.swap_hashes.push_back(fake_hash(i == 0 ? 0 : i + 1));  // A0 then A1..A4
    for (int i = 6; i < 10; ++i) fc.hoist_hashes.push_back(fake_hash(i));
    for (int i = 10; i < 13; ++i) fc.noise_hashes.push_back(fake_hash(i));
    return fc;
}

void write_corpus_dir(const std::string& dir, const FixtureCorpus& fc) {
    fs::create_directories(dir);
    std::string out;
    for (const RawCommit& r : fc.raw) out += raw_to_json(r).dump() + "\n";
    write_file((fs::path(dir) / "commits.jsonl").string(), out);
}

ReplayScript make_fixture_replay(const FixtureCorpus& fc) {
    ReplayScript rs;
    rs.embedder("fixture-embedder", 8);

    auto in = [](const std::string& hash, const std::vector<std::string>& group) {
        return std::find(group.begin(), group.end(), hash) != group.end();
    };

    // verifier answers for every raw commit that reaches the LLM gate
    for (const RawCommit& r : fc.raw) {
        if (r.message == "Fix null pointer dereference in parser") continue;  // no keyword
        if (r.message == "Optimize both readers") continue;                   // two functions
        std::string answer = r.message == "Rename perf counters"
                                 ? "NO. The diff only renames a local variable."
                                 : "YES, this reduces work on the hot path.";
        rs.completion(verify_prompt(r.message, r.diff), answer);
    }

    std::map<std::string, const CommitRecord*> by_hash;
    for (const CommitRecord& c : fc.mined) by_hash[c.commit_hash] = &c;

    for (const CommitRecord& c : fc.mined) {
        std::string text;
        if (in(c.commit_hash, fc.swap_hashes)) text = fc.summary_swap;
        else if (in(c.commit_hash, fc.hoist_hashes)) text = fc.summary_hoist;
        else if (c.commit_hash == fc.noise_hashes[0]) text = fc.summary_noise[0];
        else if (c.commit_hash == fc.noise_hashes[1]) text = fc.summary_noise[1];
        else text = fc.summary_noise[2];
        rs.completion(summarize_prompt(c), text);
    }

    rs.embedding(fc.summary_swap, {1, 0, 0, 0, 0, 0, 0, 0});
    rs.embedding(fc.summary_hoist, {0, 1, 0, 0, 0, 0, 0, 0});
    rs.embedding(fc.summary_noise[0], {0, 0, 1, 0, 0, 0, 0, 0});
    rs.embedding(fc.summary_noise[1], {0, 0, 0, 1, 0, 0, 0, 0});
    rs.embedding(fc.summary_noise[2], {0, 0, 0, 0, 1, 0, 0, 0});

    for (const std::string& hash : fc.swap_hashes) {
        const CommitRecord& c = *by_hash.at(hash);
        rs.completion(understand_prompt(c), kAnalysisSwap);
        rs.completion(generate_prompt(kAnalysisSwap, c),
                      "Here is the rule.\n\n```yaml\n" + std::string(kYamlSwap) + "```\n");
    }
    for (const std::string& hash : fc.hoist_hashes) {
        const CommitRecord& c = *by_hash.at(hash);
        rs.completion(understand_prompt(c), kAnalysisHoist);
        rs.completion(generate_prompt(kAnalysisHoist, c),
                      "Here is the rule.\n\n```yaml\n" + std::string(kYamlHoist) + "```\n");
    }
    return rs;
}

} // namespace stratforge::testing
