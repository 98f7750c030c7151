#include <doctest.h>

#include "stratforge/error.hpp"
#include "stratforge/types.hpp"

#include "../support/fixtures.hpp"

using namespace stratforge;
using stratforge::testing::fake_hash;
using stratforge::testing::make_commit;

TEST_CASE("pipeline defaults match the published configuration") {
    PipelineConfig c;
    CHECK(c.m_summaries == 3);
    CHECK(c.eps_sim == doctest::Approx(0.89));
    CHECK(c.min_cluster_size == 3);
    CHECK(c.n_sample_commits == 10);
    CHECK(c.n_attempts == 5);
    CHECK(c.max_iterations == 7);
    CHECK(c.top_k_locations == 25);
    CHECK(c.temperature == 0.0);
    CHECK(c.min_pts == 2);
    CHECK(c.workers == 1);
    c.validate();  // defaults are a valid configuration
}

TEST_CASE("config json roundtrips and rejects unknown keys") {
    PipelineConfig c;
    c.seed = 17;
    c.eps_sim = 0.8;
    PipelineConfig back = PipelineConfig::from_json(c.to_json());
    CHECK(back.seed == 17);
    CHECK(back.eps_sim == doctest::Approx(0.8));
    CHECK(back.m_summaries == c.m_summaries);

    json j = c.to_json();
    j["epsilon"] = 0.5;  // typo for eps_sim: must not be silently ignored
    CHECK_THROWS_WITH_AS(PipelineConfig::from_json(j), doctest::Contains("epsilon"),
                         ConfigError);
}

TEST_CASE("config validation rejects out-of-range values") {
    PipelineConfig c;
    c.eps_sim = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = PipelineConfig{};
    c.n_attempts = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = PipelineConfig{};
    c.min_pts = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("commit record validation enforces hash shape and diff consistency") {
    CommitRecord good = make_commit("repo/x", 1, "msg", "f", "int f() {\n    return 1;\n}\n",
                                    "int f() {\n    return 2;\n}\n");
    good.validate();

    CommitRecord bad_hash = good;
    bad_hash.commit_hash = "XYZ";
    CHECK_THROWS_AS(bad_hash.validate(), Error);

    CommitRecord same = good;
    same.code_after = same.code_before;
    CHECK_THROWS_AS(same.validate(), Error);

    CommitRecord broken_diff = good;
    broken_diff.diff = "--- a\n+++ b\n@@ -1,1 +1,1 @@\n-nope\n+nah\n";
    CHECK_THROWS_AS(broken_diff.validate(), Error);
}

TEST_CASE("commit record json roundtrip") {
    CommitRecord c = make_commit("repo/x", 2, "make it faster", "g",
                                 "int g() {\n    return 10;\n}\n",
                                 "int g() {\n    return 20;\n}\n");
    CommitRecord back = CommitRecord::from_json(c.to_json(), "test");
    CHECK(back.commit_hash == c.commit_hash);
    CHECK(back.code_before == c.code_before);
    CHECK(back.code_after == c.code_after);
    CHECK(back.diff == c.diff);
    back.validate();
}

TEST_CASE("summary validation wants a unit embedding and a member text") {
    StrategySummary s;
    s.commit_hash = fake_hash(3);
    s.text = "hoist the call";
    s.candidate_texts = {"hoist the call"};
    s.embedding = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(s.validate(), Error);  // zero norm

    s.embedding = Eigen::VectorXd::Unit(4, 0);
    s.validate();

    s.text = "not among the candidates";
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("ranked locations roundtrip and reject malformed json") {
    RankedLocation loc{"src/a.cpp", "fn", 3, 9, "c123", 2};
    RankedLocation back = RankedLocation::from_json(loc.to_json(), "test");
    CHECK(back == loc);

    json j = loc.to_json();
    j["start_line"] = 0;
    CHECK_THROWS_AS(RankedLocation::from_json(j, "test"), ParseError);
    j = loc.to_json();
    j["end_line"] = 2;  // before start
    CHECK_THROWS_AS(RankedLocation::from_json(j, "test"), ParseError);
    j = loc.to_json();
    j.erase("hit_count");
    CHECK_THROWS_AS(RankedLocation::from_json(j, "test"), Error);
}

TEST_CASE("enum names map both directions") {
    CHECK(ablation_mode_name(AblationMode::Full) == "full");
    CHECK(ablation_mode_from_name("no-location") == AblationMode::NoLocation);
    CHECK(ablation_mode_from_name("no-strategy") == AblationMode::NoStrategy);
    CHECK_THROWS_AS(ablation_mode_from_name("bogus"), Error);
    CHECK(rule_status_name(RuleStatus::Validated) == "Validated");
    CHECK(rule_status_from_name("Failed") == RuleStatus::Failed);
    CHECK(language_name(Language::CPP) == "CPP");
    CHECK(language_from_name("cpp") == Language::CPP);  // engine-style spelling
    CHECK(language_from_name("c") == Language::C);
}

TEST_CASE("vector json helpers roundtrip") {
    Eigen::VectorXd v(3);
    v << 0.5, -1.25, 2.0;
    Eigen::VectorXd back = vector_from_json(vector_to_json(v), "test");
    CHECK(back.size() == 3);
    CHECK(back(0) == 0.5);
    CHECK(back(1) == -1.25);
    CHECK(back(2) == 2.0);
}
