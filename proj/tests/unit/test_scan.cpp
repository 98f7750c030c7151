#include <doctest.h>

#include <string>
#include <vector>

#include "stratforge/error.hpp"
#include "stratforge/rule_yaml.hpp"
#include "stratforge/scan.hpp"
#include "stratforge/text.hpp"

#include "../support/test_util.hpp"

using namespace stratforge;
using stratforge::testing::TempDir;
using stratforge::testing::env_or_die;
using stratforge::testing::write_file;

namespace {

ScanHit hit(const std::string& rule, const std::string& cluster, const std::string& file,
            int start, int end) {
    ScanHit h;
    h.rule_id = rule;
    h.cluster_id = cluster;
    h.file_path = file;
    h.start_line = start;
    h.end_line = end;
    return h;
}

// Attribute every line to one wide function so per-function capping is global.
FunctionLookup one_function(const std::string& name = "fn") {
    return [name](const std::string&, int) -> FunctionRef { return {name, 1, 100000}; };
}

AnalysisRule make_rule(const std::string& rule_id, const std::string& cluster_id,
                       const std::string& pattern, RuleStatus status = RuleStatus::Validated) {
    RuleSpec spec;
    spec.id = rule_id;
    spec.languages = {"cpp"};
    spec.severity = "WARNING";
    spec.message = "candidate optimization site";
    spec.clause.kind = PatternClause::Kind::Single;
    spec.clause.patterns = {pattern};
    AnalysisRule r;
    r.rule_id = rule_id;
    r.cluster_id = cluster_id;
    r.yaml_text = emit_rule_yaml(spec);
    r.status = status;
    return r;
}

} // namespace

TEST_CASE("scan_targets runs each validated rule and skips broken or failed ones") {
    TempDir tmp("scan");
    std::string a = tmp.sub("targets") + "/a.cpp";
    std::string b = tmp.sub("targets") + "/b.cpp";
    write_file(a,
               "size_t walk(const char* s) {\n"
               "    size_t n = 0;\n"
               "    for (size_t i = 0; i < strlen(s); i++) {\n"
               "        n++;\n"
               "    }\n"
               "    return n;\n"
               "}\n");
    write_file(b,
               "bool check(const Record& r) {\n"
               "    if (expensive_validate(r) && r.flag) {\n"
               "        return true;\n"
               "    }\n"
               "    return false;\n"
               "}\n");

    StrategyLibrary lib;
    lib.rules.push_back(make_rule("cAAA-1-a1", "cAAA", "for (...; $I < strlen($S); ...)"));
    lib.rules.push_back(make_rule("cBBB-1-a1", "cBBB", "if ($F($R) && $R.flag)"));
    // would match a.cpp, but it is not validated so the scan must not run it
    lib.rules.push_back(
        make_rule("cCCC-1-a1", "cCCC", "for (...; $I < strlen($S); ...)", RuleStatus::Failed));
    // validated but structurally broken: the engine rejects it and the scan moves on
    AnalysisRule broken = make_rule("cDDD-1-a1", "cDDD", "f($X)");
    broken.yaml_text =
        "rules:\n  - id: cDDD-1-a1\n    severity: WARNING\n    message: m\n    pattern: f($X)\n";
    lib.rules.push_back(broken);

    std::vector<ScanHit> hits = scan_targets(lib, {a, b}, env_or_die("STRATFORGE_TEST_ENGINE"),
                                             tmp.sub("work"));
    REQUIRE(hits.size() == 2);
    // sorted by file path: a.cpp before b.cpp
    CHECK(hits[0].rule_id == "cAAA-1-a1");
    CHECK(hits[0].cluster_id == "cAAA");
    CHECK(hits[0].file_path == a);
    CHECK(hits[0].start_line == 3);
    CHECK(hits[0].end_line == 3);
    CHECK(hits[1].rule_id == "cBBB-1-a1");
    CHECK(hits[1].file_path == b);
    CHECK(hits[1].start_line == 2);
}

TEST_CASE("scan_targets with no validated rules or no targets returns nothing") {
    TempDir tmp("scan");
    StrategyLibrary lib;
    CHECK(scan_targets(lib, {"whatever.cpp"}, "/bin/false", tmp.sub("w")).empty());
    lib.rules.push_back(make_rule("r", "c", "f($X)", RuleStatus::Failed));
    CHECK(scan_targets(lib, {"whatever.cpp"}, "/bin/false", tmp.sub("w2")).empty());
}

TEST_CASE("hits sharing a line merge; adjacent hits stay apart") {
    // [1,3] and [3,5] overlap on line 3 -> one location spanning [1,5]
    auto merged = aggregate_and_rank(
        {hit("r1", "c1", "f.cpp", 1, 3), hit("r2", "c1", "f.cpp", 3, 5)}, 25, one_function());
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].start_line == 1);
    CHECK(merged[0].end_line == 5);
    CHECK(merged[0].hit_count == 2);

    // [1,3] and [4,5] touch but do not share a line -> two locations
    auto apart = aggregate_and_rank(
        {hit("r1", "c1", "f.cpp", 1, 3), hit("r2", "c1", "f.cpp", 4, 5)}, 25, one_function());
    REQUIRE(apart.size() == 2);
    CHECK(apart[0].hit_count == 1);
    CHECK(apart[1].hit_count == 1);
}

TEST_CASE("hit_count counts distinct rules, not raw findings") {
    auto out = aggregate_and_rank({hit("r1", "c1", "f.cpp", 2, 4),
                                   hit("r2", "c1", "f.cpp", 2, 4),
                                   hit("r3", "c2", "f.cpp", 3, 4),
                                   hit("r1", "c1", "f.cpp", 2, 4)},  // duplicate of the first
                                  25, one_function());
    REQUIRE(out.size() == 1);
    CHECK(out[0].hit_count == 3);
}

TEST_CASE("the location's cluster is the one contributing the most rules") {
    auto out = aggregate_and_rank({hit("r1", "cBBB", "f.cpp", 1, 2),
                                   hit("r2", "cBBB", "f.cpp", 1, 2),
                                   hit("r3", "cAAA", "f.cpp", 2, 2)},
                                  25, one_function());
    REQUIRE(out.size() == 1);
    CHECK(out[0].cluster_id == "cBBB");
    CHECK(out[0].hit_count == 3);
}

TEST_CASE("a cluster-majority tie goes to the lexicographically smaller id") {
    auto out = aggregate_and_rank(
        {hit("r1", "cZZZ", "f.cpp", 1, 2), hit("r2", "cAAA", "f.cpp", 2, 3)}, 25, one_function());
    REQUIRE(out.size() == 1);
    CHECK(out[0].cluster_id == "cAAA");
}

TEST_CASE("each function keeps at most top_k locations") {
    // 30 disjoint single-line groups in one function; lines 1..5 carry two
    // rules each, the rest one. top_k=25 keeps all heavy ones and trims the
    // tail by start line.
    std::vector<ScanHit> hits;
    for (int line = 1; line <= 30; ++line) {
        hits.push_back(hit("r" + std::to_string(line), "c1", "f.cpp", line, line));
        if (line <= 5)
            hits.push_back(hit("extra" + std::to_string(line), "c1", "f.cpp", line, line));
    }
    auto out = aggregate_and_rank(hits, 25, one_function());
    REQUIRE(out.size() == 25);
    int twos = 0;
    for (const RankedLocation& loc : out) {
        if (loc.hit_count == 2) ++twos;
        CHECK(loc.function_name == "fn");
    }
    CHECK(twos == 5);
    // the cut falls on the last single-hit lines: 26..30 are gone
    for (const RankedLocation& loc : out) CHECK(loc.start_line <= 25);

    // output is ordered hit-heavy first, then by position
    CHECK(out[0].hit_count == 2);
    CHECK(out[4].hit_count == 2);
    CHECK(out[5].hit_count == 1);
    CHECK(out[5].start_line == 6);
}

TEST_CASE("the cap is per function, not per file") {
    // two functions in one file, three groups each, top_k = 2
    FunctionLookup two_functions = [](const std::string&, int line) -> FunctionRef {
        if (line <= 50) return {"first", 1, 50};
        return {"second", 51, 100};
    };
    std::vector<ScanHit> hits;
    for (int line : {10, 20, 30, 60, 70, 80})
        hits.push_back(hit("r" + std::to_string(line), "c1", "f.cpp", line, line));
    auto out = aggregate_and_rank(hits, 2, two_functions);
    REQUIRE(out.size() == 4);
    int first_count = 0, second_count = 0;
    for (const RankedLocation& loc : out) {
        if (loc.function_name == "first") ++first_count;
        if (loc.function_name == "second") ++second_count;
    }
    CHECK(first_count == 2);
    CHECK(second_count == 2);
}

TEST_CASE("results are sorted by file, then hit count, then position") {
    auto out = aggregate_and_rank({hit("r1", "c1", "zz.cpp", 1, 1),
                                   hit("r2", "c1", "aa.cpp", 9, 9),
                                   hit("r3", "c1", "aa.cpp", 2, 2),
                                   hit("r4", "c1", "aa.cpp", 2, 2)},
                                  25, one_function());
    REQUIRE(out.size() == 3);
    CHECK(out[0].file_path == "aa.cpp");
    CHECK(out[0].start_line == 2);   // two rules beat one
    CHECK(out[0].hit_count == 2);
    CHECK(out[1].file_path == "aa.cpp");
    CHECK(out[1].start_line == 9);
    CHECK(out[2].file_path == "zz.cpp");
}

TEST_CASE("hits outside any function still rank, bucketed by file") {
    FunctionLookup none = [](const std::string&, int) -> FunctionRef { return {"", 0, 0}; };
    auto out = aggregate_and_rank(
        {hit("r1", "c1", "f.cpp", 3, 3), hit("r2", "c1", "f.cpp", 8, 8)}, 1, none);
    // both share the empty-function bucket, so top_k = 1 keeps only one
    REQUIRE(out.size() == 1);
    CHECK(out[0].function_name.empty());
    CHECK(out[0].start_line == 3);
}

TEST_CASE("top_k below one is rejected") {
    CHECK_THROWS_AS(aggregate_and_rank({}, 0, one_function()), Error);
}

TEST_CASE("the file-backed lookup attributes lines to enclosing functions") {
    TempDir tmp("lookup");
    std::string path = tmp.sub("src") + "/two.cpp";
    write_file(path,
               "int first(int a) {\n"
               "    return a + 1;\n"
               "}\n"
               "\n"
               "int second(int b) {\n"
               "    return b * 2;\n"
               "}\n");
    FunctionLookup look = make_function_lookup();
    FunctionRef f1 = look(path, 2);
    CHECK(f1.name == "first");
    CHECK(f1.start_line == 1);
    CHECK(f1.end_line == 3);
    FunctionRef f2 = look(path, 6);
    CHECK(f2.name == "second");
    FunctionRef gap = look(path, 4);
    CHECK(gap.name.empty());
    CHECK(gap.start_line == 0);
    // a missing file degrades to "no function" instead of failing the scan
    FunctionRef missing = look(tmp.sub("src") + "/absent.cpp", 1);
    CHECK(missing.name.empty());
}
