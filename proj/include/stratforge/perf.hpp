#pragma once

#include <map>
#include <string>
#include <vector>

#include "stratforge/json_io.hpp"

namespace stratforge {

enum class Direction { HigherBetter, LowerBetter };
std::string direction_name(Direction d);
Direction direction_from_name(const std::string& name, const std::string& ctx);

struct ProfileEntry {
    std::string function_name;
    double self_fraction = 0;  // share of total runtime, [0,1]
};

// JSON list of {"function": name, "fraction": f}; fractions must sum to <= 1
// (plus epsilon for rounding).
std::vector<ProfileEntry> load_profile(const std::string& path);

// Functions whose fraction is STRICTLY above threshold, fraction desc then
// name asc.
std::vector<std::string> identify_hotspots(const std::vector<ProfileEntry>& profile,
                                           double threshold);

struct PerfMeasurement {
    std::string test_case_id;
    Direction direction = Direction::HigherBetter;
    double before = 0;  // x
    double after = 0;   // y

    json to_json() const;
    static PerfMeasurement from_json(const json& j, const std::string& ctx);
};

// (y-x)/x when higher is better, (x-y)/y when lower is better. Either way
// 10 -> 20 of a throughput and 20 -> 10 of a latency are both +1.00.
double improvement_ratio(const PerfMeasurement& m);

// Gate: some case improves by strictly more than 5% AND no case degrades by
// more than 2% (ratio >= -0.02, boundary passes).
bool is_effective(const std::vector<PerfMeasurement>& measurements);

struct VariantReport {
    std::string function_name;
    std::string variant_id;
    std::vector<PerfMeasurement> measurements;
    bool effective = false;
    double total_score = 0;  // sum of improvement ratios, negatives included

    json to_json() const;
    static VariantReport from_json(const json& j, const std::string& ctx);
};

VariantReport make_variant_report(const std::string& function_name, const std::string& variant_id,
                                  const std::vector<PerfMeasurement>& measurements);

// Per function: among effective variants, highest total_score wins, ties to
// the smallest variant_id; no effective variant keeps "Original".
extern const char* const kKeepOriginal;
std::map<std::string, std::string> combine_variants(
    const std::map<std::string, std::vector<VariantReport>>& variants_by_function);

// How to build, gate, and measure one project variant. Commands are argv
// lists run in the variant directory, no shell. Each test case is parsed out
// of the perf command's stdout by a regex whose first capture group is the
// numeric result.
struct PerfCaseSpec {
    std::string id;
    std::string value_regex;
    Direction direction = Direction::HigherBetter;
};

struct PerfManifest {
    std::vector<std::string> build_cmd;  // optional (empty = skip)
    std::vector<std::string> test_cmd;   // unit-test gate, required
    std::vector<std::string> perf_cmd;   // required
    std::vector<PerfCaseSpec> cases;     // at least one

    static PerfManifest from_json(const json& j);
    static PerfManifest load(const std::string& path);
};

struct CaseSeries {
    std::string id;
    Direction direction = Direction::HigherBetter;
    std::vector<double> run_values;  // all runs, first retained for the record
    double mean = 0;                 // over runs 2..N

    json to_json() const;
};

struct MeasureResult {
    bool ok = false;
    std::string error;  // build/test-gate/parse failure
    std::vector<CaseSeries> cases;

    json to_json() const;
};

// Protocol: build (if configured), run the unit tests once — a failure aborts
// the variant — then run the perf command `runs` times back to back, discard
// the first run's values, and average the rest per case. Strictly serial.
MeasureResult measure_variant(const PerfManifest& manifest, const std::string& variant_dir,
                              int runs);

// before/after pairing of two measured variants into PerfMeasurements, joined
// by case id (cases must agree).
std::vector<PerfMeasurement> pair_measurements(const MeasureResult& baseline,
                                               const MeasureResult& variant);

} // namespace stratforge
