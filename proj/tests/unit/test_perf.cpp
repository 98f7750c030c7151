#include <doctest.h>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stratforge/error.hpp"
#include "stratforge/perf.hpp"
#include "stratforge/text.hpp"

#include "../support/test_util.hpp"

using namespace stratforge;
using stratforge::testing::TempDir;
using stratforge::testing::write_file;
using stratforge::testing::write_script;

namespace {

PerfMeasurement meas(const std::string& id, Direction d, double before, double after) {
    PerfMeasurement m;
    m.test_case_id = id;
    m.direction = d;
    m.before = before;
    m.after = after;
    return m;
}

} // namespace

TEST_CASE("profiles load and reject malformed input") {
    TempDir tmp("perf");
    std::string path = tmp.sub("p") + "/profile.json";
    write_file(path, R"([{"function": "hot", "fraction": 0.6},
                         {"function": "warm", "fraction": 0.3}])");
    auto profile = load_profile(path);
    REQUIRE(profile.size() == 2);
    CHECK(profile[0].function_name == "hot");
    CHECK(profile[0].self_fraction == doctest::Approx(0.6));

    write_file(path, R"({"function": "hot"})");
    CHECK_THROWS_AS(load_profile(path), ConfigError);  // not an array
    write_file(path, R"([{"function": "hot", "fraction": 1.5}])");
    CHECK_THROWS_AS(load_profile(path), ConfigError);  // out of range
    write_file(path, R"([{"function": "a", "fraction": 0.7}, {"function": "b", "fraction": 0.7}])");
    CHECK_THROWS_AS(load_profile(path), ConfigError);  // sums past 1
    write_file(path, R"([{"fraction": 0.5}])");
    CHECK_THROWS_AS(load_profile(path), ConfigError);  // missing name
}

TEST_CASE("hotspots are strictly above the threshold, heaviest first") {
    std::vector<ProfileEntry> profile = {
        {"exactly_at", 0.001}, {"heavy", 0.40},  {"light", 0.0005},
        {"medium", 0.10},      {"also_heavy", 0.40},
    };
    auto hot = identify_hotspots(profile, 0.001);
    // 0.001 itself is excluded; equal fractions tie-break by name
    REQUIRE(hot.size() == 3);
    CHECK(hot[0] == "also_heavy");
    CHECK(hot[1] == "heavy");
    CHECK(hot[2] == "medium");
    CHECK(identify_hotspots(profile, 0.5).empty());
    CHECK(identify_hotspots({}, 0.001).empty());
    CHECK_THROWS_AS(identify_hotspots(profile, -0.1), Error);
    CHECK_THROWS_AS(identify_hotspots(profile, 1.5), Error);
}

TEST_CASE("the improvement ratio is symmetric across directions") {
    // doubling throughput and halving latency are the same +1.00
    CHECK(improvement_ratio(meas("t", Direction::HigherBetter, 10, 20)) == doctest::Approx(1.0));
    CHECK(improvement_ratio(meas("t", Direction::LowerBetter, 20, 10)) == doctest::Approx(1.0));
    // a regression reads negative either way
    CHECK(improvement_ratio(meas("t", Direction::HigherBetter, 100, 80)) ==
          doctest::Approx(-0.2));
    CHECK(improvement_ratio(meas("t", Direction::LowerBetter, 80, 100)) ==
          doctest::Approx(-0.2));
    // unchanged is exactly zero
    CHECK(improvement_ratio(meas("t", Direction::HigherBetter, 55, 55)) == 0.0);

    CHECK_THROWS_AS(improvement_ratio(meas("t", Direction::HigherBetter, 0, 10)), Error);
    CHECK_THROWS_AS(improvement_ratio(meas("t", Direction::LowerBetter, 10, -1)), Error);
}

TEST_CASE("effectiveness needs one real gain and tolerates only tiny losses") {
    auto gain = [](double r) {  // a measurement with ratio exactly r
        return meas("g", Direction::HigherBetter, 100, 100 * (1 + r));
    };
    // one clear gain
    CHECK(is_effective({gain(0.10)}));
    // exactly 5% is not "strictly more than 5%"
    CHECK_FALSE(is_effective({meas("g", Direction::HigherBetter, 100, 105)}));
    CHECK(is_effective({meas("g", Direction::HigherBetter, 100, 106)}));
    // a gain elsewhere cannot excuse a real regression
    CHECK_FALSE(is_effective({gain(0.50), meas("l", Direction::HigherBetter, 100, 97)}));
    // a 2% loss is exactly on the boundary and passes
    CHECK(is_effective({gain(0.50), meas("l", Direction::HigherBetter, 100, 98)}));
    // small gains everywhere but none above 5%
    CHECK_FALSE(is_effective({gain(0.04), gain(0.03), gain(0.01)}));
    // flat is not effective
    CHECK_FALSE(is_effective({meas("g", Direction::HigherBetter, 70, 70)}));
    CHECK_THROWS_AS(is_effective({}), Error);
}

TEST_CASE("variant reports sum ratios with regressions included") {
    VariantReport r = make_variant_report(
        "fn", "v1",
        {meas("a", Direction::HigherBetter, 100, 150),    // +0.50
         meas("b", Direction::LowerBetter, 100, 101)});   // -0.0099...
    CHECK(r.effective);
    CHECK(r.total_score == doctest::Approx(0.5 - 1.0 / 101.0));
    VariantReport empty = make_variant_report("fn", "v0", {});
    CHECK_FALSE(empty.effective);
    CHECK(empty.total_score == 0.0);
}

TEST_CASE("reading a report back recomputes the verdict instead of trusting it") {
    json j = {{"function_name", "fn"},
              {"variant_id", "v1"},
              {"effective", true},      // lies
              {"total_score", 99.0},    // lies
              {"measurements", json::array({meas("a", Direction::HigherBetter, 100, 101).to_json()})}};
    VariantReport r = VariantReport::from_json(j, "test");
    CHECK_FALSE(r.effective);
    CHECK(r.total_score == doctest::Approx(0.01));
    // a measurement roundtrip is lossless
    PerfMeasurement m = meas("a", Direction::LowerBetter, 12.5, 11);
    PerfMeasurement back = PerfMeasurement::from_json(m.to_json(), "test");
    CHECK(back.test_case_id == m.test_case_id);
    CHECK(back.direction == m.direction);
    CHECK(back.before == m.before);
    CHECK(back.after == m.after);
}

TEST_CASE("per function, the best effective variant wins; none keeps the original") {
    auto effective_with_score = [](const std::string& id, double gain_ratio) {
        return make_variant_report("fn", id,
                                   {meas("c", Direction::HigherBetter, 100, 100 * (1 + gain_ratio))});
    };
    std::map<std::string, std::vector<VariantReport>> by_fn;
    by_fn["alpha"] = {effective_with_score("v1", 0.10), effective_with_score("v2", 0.30),
                      effective_with_score("v3", 0.20)};
    // an ineffective variant with a huge score must not win
    by_fn["beta"] = {make_variant_report(
                         "fn", "v1",
                         {meas("c", Direction::HigherBetter, 100, 300),
                          meas("d", Direction::HigherBetter, 100, 90)}),  // -10% kills it
                     effective_with_score("v2", 0.06)};
    by_fn["gamma"] = {make_variant_report("fn", "v1",
                                          {meas("c", Direction::HigherBetter, 100, 104)})};
    by_fn["delta"] = {};

    auto sel = combine_variants(by_fn);
    CHECK(sel.at("alpha") == "v2");
    CHECK(sel.at("beta") == "v2");
    CHECK(sel.at("gamma") == kKeepOriginal);
    CHECK(sel.at("delta") == kKeepOriginal);
}

TEST_CASE("a total-score tie goes to the smallest variant id") {
    auto v = [](const std::string& id) {
        return make_variant_report("fn", id, {meas("c", Direction::HigherBetter, 100, 110)});
    };
    std::map<std::string, std::vector<VariantReport>> by_fn;
    by_fn["fn"] = {v("v9"), v("v2"), v("v5")};
    CHECK(combine_variants(by_fn).at("fn") == "v2");
}

TEST_CASE("manifests demand commands, cases, and valid regexes") {
    json good = {{"test_cmd", {"./test.sh"}},
                 {"perf_cmd", {"./perf.sh"}},
                 {"cases", json::array({{{"id", "tp"},
                                         {"regex", "throughput: ([0-9.]+)"},
                                         {"direction", "HigherBetter"}}})}};
    PerfManifest m = PerfManifest::from_json(good);
    CHECK(m.build_cmd.empty());
    CHECK(m.cases.size() == 1);
    CHECK(m.cases[0].direction == Direction::HigherBetter);

    json bad = good;
    bad.erase("test_cmd");
    CHECK_THROWS_AS(PerfManifest::from_json(bad), ConfigError);
    bad = good;
    bad["cases"] = json::array();
    CHECK_THROWS_AS(PerfManifest::from_json(bad), ConfigError);
    bad = good;
    bad["cases"][0]["regex"] = "([ broken";
    CHECK_THROWS_AS(PerfManifest::from_json(bad), ConfigError);
    bad = good;
    bad["cases"][0]["direction"] = "Sideways";
    CHECK_THROWS_AS(PerfManifest::from_json(bad), ConfigError);
}

TEST_CASE("measurement builds once, gates on tests, and discards the warmup run") {
    TempDir tmp("perf");
    std::string dir = tmp.sub("variant");
    // each script counts its invocations in its own file
    write_script(dir + "/build.sh", "#!/bin/sh\necho x >> build-runs\n");
    write_script(dir + "/test.sh", "#!/bin/sh\necho x >> test-runs\n");
    write_script(dir + "/perf.sh",
                 "#!/bin/sh\n"
                 "n=$(cat perf-runs 2>/dev/null || echo 0)\n"
                 "n=$((n+1))\n"
                 "echo $n > perf-runs\n"
                 "echo \"throughput: $((100 + n * 10)) ops\"\n"
                 "echo \"latency: $((50 - n)) ms\"\n");

    PerfManifest manifest;
    manifest.build_cmd = {"./build.sh"};
    manifest.test_cmd = {"./test.sh"};
    manifest.perf_cmd = {"./perf.sh"};
    manifest.cases = {{"tp", "throughput: ([0-9.]+) ops", Direction::HigherBetter},
                      {"lat", "latency: ([0-9.]+) ms", Direction::LowerBetter}};

    MeasureResult res = measure_variant(manifest, dir, 3);
    REQUIRE(res.ok);
    CHECK(read_text_file(dir + "/build-runs") == "x\n");
    CHECK(read_text_file(dir + "/test-runs") == "x\n");
    CHECK(read_text_file(dir + "/perf-runs") == "3\n");
    REQUIRE(res.cases.size() == 2);
    CHECK(res.cases[0].run_values == std::vector<double>{110, 120, 130});
    CHECK(res.cases[0].mean == doctest::Approx(125.0));  // first run dropped
    CHECK(res.cases[1].run_values == std::vector<double>{49, 48, 47});
    CHECK(res.cases[1].mean == doctest::Approx(47.5));

    CHECK_THROWS_AS(measure_variant(manifest, dir, 1), Error);  // nothing left after warmup
}

TEST_CASE("a failing unit test blocks measurement entirely") {
    TempDir tmp("perf");
    std::string dir = tmp.sub("variant");
    write_script(dir + "/test.sh", "#!/bin/sh\necho 'assertion failed: walk()' >&2\nexit 1\n");
    write_script(dir + "/perf.sh", "#!/bin/sh\necho x >> perf-runs\necho 'throughput: 100 ops'\n");
    PerfManifest manifest;
    manifest.test_cmd = {"./test.sh"};
    manifest.perf_cmd = {"./perf.sh"};
    manifest.cases = {{"tp", "throughput: ([0-9.]+) ops", Direction::HigherBetter}};

    MeasureResult res = measure_variant(manifest, dir, 3);
    CHECK_FALSE(res.ok);
    CHECK(res.error.find("unit tests failed") != std::string::npos);
    CHECK(res.error.find("assertion failed: walk()") != std::string::npos);
    CHECK(res.cases.empty());
    CHECK_FALSE(std::filesystem::exists(dir + "/perf-runs"));  // never reached the perf command
}

TEST_CASE("a perf run whose output defies the regex voids the measurement") {
    TempDir tmp("perf");
    std::string dir = tmp.sub("variant");
    write_script(dir + "/test.sh", "#!/bin/sh\nexit 0\n");
    write_script(dir + "/perf.sh", "#!/bin/sh\necho 'all good, no numbers'\n");
    PerfManifest manifest;
    manifest.test_cmd = {"./test.sh"};
    manifest.perf_cmd = {"./perf.sh"};
    manifest.cases = {{"tp", "throughput: ([0-9.]+) ops", Direction::HigherBetter}};
    MeasureResult res = measure_variant(manifest, dir, 2);
    CHECK_FALSE(res.ok);
    CHECK(res.error.find("regex matched nothing") != std::string::npos);
    CHECK(res.cases.empty());
}

TEST_CASE("pairing joins case series by id and refuses mismatches") {
    MeasureResult base;
    base.ok = true;
    base.cases = {{"tp", Direction::HigherBetter, {100, 100}, 100},
                  {"lat", Direction::LowerBetter, {50, 50}, 50}};
    MeasureResult var;
    var.ok = true;
    var.cases = {{"tp", Direction::HigherBetter, {120, 120}, 120},
                 {"lat", Direction::LowerBetter, {40, 40}, 40}};

    auto ms = pair_measurements(base, var);
    REQUIRE(ms.size() == 2);
    CHECK(ms[0].test_case_id == "tp");
    CHECK(ms[0].before == 100);
    CHECK(ms[0].after == 120);
    CHECK(improvement_ratio(ms[0]) == doctest::Approx(0.2));
    CHECK(improvement_ratio(ms[1]) == doctest::Approx(0.25));

    MeasureResult renamed = var;
    renamed.cases[1].id = "latency";
    CHECK_THROWS_AS(pair_measurements(base, renamed), Error);
    MeasureResult broken;
    broken.error = "build failed";
    CHECK_THROWS_AS(pair_measurements(base, broken), Error);
}
