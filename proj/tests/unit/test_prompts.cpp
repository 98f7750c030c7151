#include <doctest.h>

#include "stratforge/prompts.hpp"

#include "../support/fixtures.hpp"

using namespace stratforge;
using stratforge::testing::make_commit;

namespace {
CommitRecord sample_commit() {
    return make_commit("repo/x", 5, "Speed up widget counting", "count_widgets",
                       "int count_widgets(const box* b) {\n    return slow_count(b);\n}\n",
                       "int count_widgets(const box* b) {\n    return fast_count(b);\n}\n");
}
} // namespace

TEST_CASE("verify prompt asks for a leading YES/NO and embeds message and diff") {
    std::string p = verify_prompt("Make it faster", "--- a\n+++ b\n");
    CHECK(p.find("Make it faster") != std::string::npos);
    CHECK(p.find("--- a") != std::string::npos);
    CHECK(p.find("YES or NO") != std::string::npos);
}

TEST_CASE("summarize prompt carries repo, message, function and diff") {
    CommitRecord c = sample_commit();
    std::string p = summarize_prompt(c);
    CHECK(p.find(c.repo_id) != std::string::npos);
    CHECK(p.find(c.message) != std::string::npos);
    CHECK(p.find(c.function_name) != std::string::npos);
    CHECK(p.find(c.diff) != std::string::npos);
    CHECK(p.find("one sentence") != std::string::npos);
}

TEST_CASE("understand prompt forbids rule output and shows the before code") {
    CommitRecord c = sample_commit();
    std::string p = understand_prompt(c);
    CHECK(p.find(c.code_before) != std::string::npos);
    CHECK(p.find("Do NOT generate") != std::string::npos);
}

TEST_CASE("generate prompt includes the analysis and the code the rule must match") {
    CommitRecord c = sample_commit();
    std::string p = generate_prompt("the analysis text", c);
    CHECK(p.find("the analysis text") != std::string::npos);
    CHECK(p.find(c.code_before) != std::string::npos);
    CHECK(p.find("```yaml") != std::string::npos);
}

TEST_CASE("repair prompt includes the failing rule and the error text") {
    CommitRecord c = sample_commit();
    std::string p = repair_prompt("rules:\n  - id: x\n", "engine exited with code 2", c);
    CHECK(p.find("rules:\n  - id: x") != std::string::npos);
    CHECK(p.find("engine exited with code 2") != std::string::npos);
    CHECK(p.find(c.code_before) != std::string::npos);

    std::string q = repair_prompt("", "no rule block", c);
    CHECK(q.find("no parsable rule") != std::string::npos);
}

TEST_CASE("optimization prompt is code, then location, then strategy, then instruction") {
    std::string numbered = "1: int f() {\n2:     return g();\n3: }\n";
    std::string p = optimization_prompt(numbered, 2, 2, "inline the call", AblationMode::Full);

    size_t code_pos = p.find(numbered);
    size_t loc_pos = p.find("lines 2 to 2");
    size_t strat_pos = p.find("inline the call");
    size_t instr_pos = p.find("Apply the optimization");
    REQUIRE(code_pos != std::string::npos);
    REQUIRE(loc_pos != std::string::npos);
    REQUIRE(strat_pos != std::string::npos);
    REQUIRE(instr_pos != std::string::npos);
    CHECK(code_pos < loc_pos);
    CHECK(loc_pos < strat_pos);
    CHECK(strat_pos < instr_pos);
}

TEST_CASE("ablations drop exactly one part each") {
    std::string numbered = "1: x\n";
    std::string no_loc = optimization_prompt(numbered, 1, 1, "strategy S", AblationMode::NoLocation);
    CHECK(no_loc.find("lines 1 to 1") == std::string::npos);
    CHECK(no_loc.find("strategy S") != std::string::npos);

    std::string no_strat = optimization_prompt(numbered, 1, 1, "strategy S", AblationMode::NoStrategy);
    CHECK(no_strat.find("lines 1 to 1") != std::string::npos);
    CHECK(no_strat.find("strategy S") == std::string::npos);

    // the code and the final instruction survive every mode
    for (const std::string& p : {no_loc, no_strat}) {
        CHECK(p.find(numbered) != std::string::npos);
        CHECK(p.find("Apply the optimization") != std::string::npos);
    }
}

TEST_CASE("rag prompt lists examples in the given order, least similar first") {
    std::string p = rag_prompt({{"before-one", "after-one"}, {"before-two", "after-two"}},
                               "task code");
    size_t one = p.find("before-one");
    size_t two = p.find("before-two");
    size_t task = p.find("task code");
    REQUIRE(one != std::string::npos);
    REQUIRE(two != std::string::npos);
    CHECK(one < two);      // ascending similarity: most similar last
    CHECK(two < task);
    CHECK(p.find("least to most similar") != std::string::npos);
}

TEST_CASE("direct prompt is just the task with the instruction") {
    std::string p = direct_prompt("int f();\n");
    CHECK(p.find("int f();") != std::string::npos);
    CHECK(p.find("single fenced code block") != std::string::npos);
}
