#include "stratforge/perf.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "stratforge/error.hpp"
#include "stratforge/subprocess.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

const char* const kKeepOriginal = "Original";

std::string direction_name(Direction d) {
    return d == Direction::HigherBetter ? "HigherBetter" : "LowerBetter";
}

Direction direction_from_name(const std::string& name, const std::string& ctx) {
    if (name == "HigherBetter") return Direction::HigherBetter;
    if (name == "LowerBetter") return Direction::LowerBetter;
    throw ConfigError(ctx + ": direction must be HigherBetter or LowerBetter, got '" + name + "'");
}

std::vector<ProfileEntry> load_profile(const std::string& path) {
    json doc = read_json_file(path);
    if (!doc.is_array()) throw ConfigError(path + ": profile must be a JSON array");
    std::vector<ProfileEntry> out;
    double sum = 0;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& e = doc[i];
        std::string ctx = path + " entry " + std::to_string(i + 1);
        ProfileEntry p;
        p.function_name = require_field(e, "function", ctx).get<std::string>();
        p.self_fraction = require_field(e, "fraction", ctx).get<double>();
        if (!(p.self_fraction >= 0 && p.self_fraction <= 1))
            throw ConfigError(ctx + ": fraction must be in [0,1]");
        sum += p.self_fraction;
        out.push_back(std::move(p));
    }
    if (sum > 1 + 1e-6)
        throw ConfigError(path + ": fractions sum to " + std::to_string(sum) + " > 1");
    return out;
}

std::vector<std::string> identify_hotspots(const std::vector<ProfileEntry>& profile,
                                           double threshold) {
    if (!(threshold >= 0 && threshold <= 1)) throw Error("hotspot threshold must be in [0,1]");
    std::vector<const ProfileEntry*> hot;
    for (const ProfileEntry& e : profile)
        if (e.self_fraction > threshold) hot.push_back(&e);
    std::sort(hot.begin(), hot.end(), [](const ProfileEntry* a, const ProfileEntry* b) {
        if (a->self_fraction != b->self_fraction) return a->self_fraction > b->self_fraction;
        return a->function_name < b->function_name;
    });
    std::vector<std::string> names;
    names.reserve(hot.size());
    for (const ProfileEntry* e : hot) names.push_back(e->function_name);
    return names;
}

json PerfMeasurement::to_json() const {
    return json{{"test_case_id", test_case_id},
                {"direction", direction_name(direction)},
                {"before", before},
                {"after", after}};
}

PerfMeasurement PerfMeasurement::from_json(const json& j, const std::string& ctx) {
    PerfMeasurement m;
    m.test_case_id = require_field(j, "test_case_id", ctx).get<std::string>();
    m.direction = direction_from_name(require_field(j, "direction", ctx).get<std::string>(), ctx);
    m.before = require_field(j, "before", ctx).get<double>();
    m.after = require_field(j, "after", ctx).get<double>();
    return m;
}

double improvement_ratio(const PerfMeasurement& m) {
    double x = m.before;
    double y = m.after;
    if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y))
        throw Error("performance values must be finite and positive (case " + m.test_case_id +
                    ": before=" + std::to_string(x) + ", after=" + std::to_string(y) + ")");
    return m.direction == Direction::HigherBetter ? (y - x) / x : (x - y) / y;
}

bool is_effective(const std::vector<PerfMeasurement>& measurements) {
    if (measurements.empty()) throw Error("effectiveness needs at least one measurement");
    bool any_gain = false;
    for (const PerfMeasurement& m : measurements) {
        double r = improvement_ratio(m);
        if (r > 0.05) any_gain = true;
        if (r < -0.02) return false;
    }
    return any_gain;
}

json VariantReport::to_json() const {
    json ms = json::array();
    for (const PerfMeasurement& m : measurements) ms.push_back(m.to_json());
    return json{{"function_name", function_name},
                {"variant_id", variant_id},
                {"measurements", ms},
                {"effective", effective},
                {"total_score", total_score}};
}

VariantReport VariantReport::from_json(const json& j, const std::string& ctx) {
    VariantReport r;
    r.function_name = require_field(j, "function_name", ctx).get<std::string>();
    r.variant_id = require_field(j, "variant_id", ctx).get<std::string>();
    for (const json& m : require_field(j, "measurements", ctx))
        r.measurements.push_back(PerfMeasurement::from_json(m, ctx));
    // Derived fields are recomputed, never trusted from disk.
    VariantReport fresh = make_variant_report(r.function_name, r.variant_id, r.measurements);
    return fresh;
}

VariantReport make_variant_report(const std::string& function_name, const std::string& variant_id,
                                  const std::vector<PerfMeasurement>& measurements) {
    VariantReport r;
    r.function_name = function_name;
    r.variant_id = variant_id;
    r.measurements = measurements;
    r.total_score = 0;
    for (const PerfMeasurement& m : measurements) r.total_score += improvement_ratio(m);
    r.effective = measurements.empty() ? false : is_effective(measurements);
    return r;
}

std::map<std::string, std::string> combine_variants(
    const std::map<std::string, std::vector<VariantReport>>& variants_by_function) {
    std::map<std::string, std::string> selection;
    for (const auto& [fn, variants] : variants_by_function) {
        const VariantReport* best = nullptr;
        for (const VariantReport& v : variants) {
            if (!v.effective) continue;
            if (best == nullptr || v.total_score > best->total_score ||
                (v.total_score == best->total_score && v.variant_id < best->variant_id))
                best = &v;
        }
        selection[fn] = best == nullptr ? kKeepOriginal : best->variant_id;
    }
    return selection;
}

PerfManifest PerfManifest::from_json(const json& j) {
    auto argv_list = [&](const char* key, bool required) {
        std::vector<std::string> argv;
        if (!j.contains(key)) {
            if (required) throw ConfigError(std::string("perf manifest: missing '") + key + "'");
            return argv;
        }
        for (const json& a : j.at(key)) argv.push_back(a.get<std::string>());
        if (required && argv.empty())
            throw ConfigError(std::string("perf manifest: '") + key + "' must not be empty");
        return argv;
    };
    PerfManifest m;
    m.build_cmd = argv_list("build_cmd", false);
    m.test_cmd = argv_list("test_cmd", true);
    m.perf_cmd = argv_list("perf_cmd", true);
    if (!j.contains("cases") || !j.at("cases").is_array() || j.at("cases").empty())
        throw ConfigError("perf manifest: 'cases' must be a non-empty array");
    for (std::size_t i = 0; i < j.at("cases").size(); ++i) {
        const json& c = j.at("cases")[i];
        std::string ctx = "perf manifest case " + std::to_string(i + 1);
        PerfCaseSpec spec;
        spec.id = require_field(c, "id", ctx).get<std::string>();
        spec.value_regex = require_field(c, "regex", ctx).get<std::string>();
        spec.direction =
            direction_from_name(require_field(c, "direction", ctx).get<std::string>(), ctx);
        try {
            std::regex probe(spec.value_regex);
        } catch (const std::regex_error& e) {
            throw ConfigError(ctx + ": bad regex: " + e.what());
        }
        m.cases.push_back(std::move(spec));
    }
    return m;
}

PerfManifest PerfManifest::load(const std::string& path) {
    return PerfManifest::from_json(read_json_file(path));
}

json CaseSeries::to_json() const {
    return json{{"id", id},
                {"direction", direction_name(direction)},
                {"run_values", run_values},
                {"mean", mean}};
}

json MeasureResult::to_json() const {
    json cs = json::array();
    for (const CaseSeries& c : cases) cs.push_back(c.to_json());
    return json{{"ok", ok}, {"error", error}, {"cases", cs}};
}

namespace {

double parse_case_value(const PerfCaseSpec& spec, const std::string& output, int run) {
    std::regex re(spec.value_regex);
    std::smatch m;
    if (!std::regex_search(output, m, re) || m.size() < 2)
        throw Error("case '" + spec.id + "': regex matched nothing in run " + std::to_string(run) +
                    " output");
    try {
        return std::stod(m[1].str());
    } catch (const std::exception&) {
        throw Error("case '" + spec.id + "': captured '" + m[1].str() + "' is not a number");
    }
}

}  // namespace

MeasureResult measure_variant(const PerfManifest& manifest, const std::string& variant_dir,
                              int runs) {
    if (runs < 2) throw Error("measurement needs at least 2 runs (first is discarded)");
    MeasureResult res;

    if (!manifest.build_cmd.empty()) {
        ProcessResult pr = run_process(manifest.build_cmd, variant_dir);
        if (pr.exec_failed || pr.exit_code != 0) {
            res.error = "build failed: " + (pr.err.empty() ? pr.out : pr.err);
            return res;
        }
    }

    // Unit-test gate: no measurement on a variant that breaks behavior.
    ProcessResult tests = run_process(manifest.test_cmd, variant_dir);
    if (tests.exec_failed || tests.exit_code != 0) {
        res.error = "unit tests failed: " + trim(tests.err.empty() ? tests.out : tests.err);
        return res;
    }

    for (const PerfCaseSpec& spec : manifest.cases)
        res.cases.push_back({spec.id, spec.direction, {}, 0});

    for (int run = 1; run <= runs; ++run) {
        ProcessResult pr = run_process(manifest.perf_cmd, variant_dir);
        if (pr.exec_failed || pr.exit_code != 0) {
            res.error = "perf run " + std::to_string(run) +
                        " failed: " + trim(pr.err.empty() ? pr.out : pr.err);
            res.cases.clear();
            return res;
        }
        for (std::size_t ci = 0; ci < manifest.cases.size(); ++ci) {
            try {
                res.cases[ci].run_values.push_back(
                    parse_case_value(manifest.cases[ci], pr.out, run));
            } catch (const Error& e) {
                res.error = e.what();
                res.cases.clear();
                return res;
            }
        }
    }

    for (CaseSeries& c : res.cases) {
        double sum = 0;
        for (std::size_t i = 1; i < c.run_values.size(); ++i) sum += c.run_values[i];
        c.mean = sum / static_cast<double>(c.run_values.size() - 1);
    }
    res.ok = true;
    return res;
}

std::vector<PerfMeasurement> pair_measurements(const MeasureResult& baseline,
                                               const MeasureResult& variant) {
    if (!baseline.ok) throw Error("baseline measurement unusable: " + baseline.error);
    if (!variant.ok) throw Error("variant measurement unusable: " + variant.error);
    if (baseline.cases.size() != variant.cases.size())
        throw Error("baseline and variant measured different case sets");
    std::vector<PerfMeasurement> ms;
    for (std::size_t i = 0; i < baseline.cases.size(); ++i) {
        const CaseSeries& b = baseline.cases[i];
        const CaseSeries& v = variant.cases[i];
        if (b.id != v.id || b.direction != v.direction)
            throw Error("case mismatch at index " + std::to_string(i) + " ('" + b.id + "' vs '" +
                        v.id + "')");
        PerfMeasurement m;
        m.test_case_id = b.id;
        m.direction = b.direction;
        m.before = b.mean;
        m.after = v.mean;
        ms.push_back(std::move(m));
    }
    return ms;
}

} // namespace stratforge
