// strat-forge: mines optimization strategies out of commit history, distills
// them into a rule library, and applies them — scan, optimize, evaluate,
// measure. Every stage is a subcommand; `run` chains them.

#include <algorithm>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stratforge/bench.hpp"
#include "stratforge/error.hpp"
#include "stratforge/json_io.hpp"
#include "stratforge/perf.hpp"
#include "stratforge/pipeline.hpp"
#include "stratforge/providers.hpp"
#include "stratforge/text.hpp"
#include "stratforge/types.hpp"
#include "stratforge/version.hpp"

#include <filesystem>

using namespace stratforge;
namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string replay_path;
    std::string run_dir = "run";
    std::string log_level_name = "info";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;  // 0: keep config value
    std::string engine_path;
};

PipelineConfig load_config(const GlobalFlags& g) {
    PipelineConfig config;
    if (!g.config_path.empty()) config = PipelineConfig::from_json(read_json_file(g.config_path));
    if (g.seed_given) config.seed = g.seed;
    if (g.workers > 0) config.workers = g.workers;
    if (!g.engine_path.empty()) config.engine_path = g.engine_path;
    config.validate();
    return config;
}

void apply_log_level(const std::string& name) {
    if (name == "debug") log_level() = LogLevel::Debug;
    else if (name == "info") log_level() = LogLevel::Info;
    else if (name == "warn") log_level() = LogLevel::Warn;
    else if (name == "quiet") log_level() = LogLevel::Quiet;
    else throw ConfigError("unknown log level '" + name + "'");
}

StageContext make_context(const GlobalFlags& g) {
    StageContext ctx;
    ctx.config = load_config(g);
    ctx.providers = make_providers(g.replay_path, ctx.config);
    ctx.run_dir = g.run_dir;
    return ctx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strat-forge: optimization-strategy mining and application"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("strat-forge ") + kVersion);

    GlobalFlags g;
    app.add_option("--config", g.config_path, "pipeline config (JSON)");
    app.add_option("--replay", g.replay_path, "replay script: scripted providers, workers=1");
    app.add_option("--out", g.run_dir, "run directory for stage artifacts")
        ->capture_default_str();
    app.add_option("--log-level", g.log_level_name, "debug|info|warn|quiet")
        ->capture_default_str();
    auto* seed_opt = app.add_option("--seed", g.seed, "sampling seed (overrides config)");
    app.add_option("--workers", g.workers, "worker threads (overrides config)");
    app.add_option("--engine", g.engine_path, "rule engine binary (overrides config)");

    // --- stage subcommands ---
    std::string corpus_dir;
    bool no_llm_verify = false;
    auto* cmd_mine = app.add_subcommand("mine", "filter a raw commit corpus into records");
    cmd_mine->add_option("--corpus", corpus_dir, "directory of raw-commit .jsonl files")
        ->required();
    cmd_mine->add_flag("--no-llm-verify", no_llm_verify, "keyword filter only");

    auto* cmd_summarize =
        app.add_subcommand("summarize", "m-way strategy summaries with embedding selection");
    auto* cmd_cluster = app.add_subcommand("cluster", "density-cluster the summaries");
    auto* cmd_rules = app.add_subcommand("rules", "synthesize validated analysis rules");

    std::vector<std::string> targets;
    auto* cmd_scan = app.add_subcommand("scan", "run the rule library over target files");
    cmd_scan->add_option("--target", targets, "source file(s) to scan")->required();

    std::string mode_name = "full";
    auto* cmd_optimize = app.add_subcommand("optimize", "prompt-optimize the ranked locations");
    cmd_optimize->add_option("--mode", mode_name, "full|no-location|no-strategy")
        ->capture_default_str();

    std::string bench_path, kb_path, approach = "strategy-lib";
    bool degraded = false;
    int repeats = 3;
    auto* cmd_eval = app.add_subcommand("eval", "benchmark an approach with exact-match scoring");
    cmd_eval->add_option("--bench", bench_path, "benchmark tasks (.jsonl)")->required();
    cmd_eval->add_option("--approach", approach, "direct|rag|strategy-lib")
        ->capture_default_str();
    cmd_eval->add_option("--kb", kb_path, "knowledge base commits (.jsonl) for rag");
    cmd_eval->add_flag("--degraded", degraded, "exclude same-repo knowledge");
    cmd_eval->add_option("--repeats", repeats, "generations per task")->capture_default_str();

    std::string verify_corpus;
    auto* cmd_verify =
        app.add_subcommand("verify", "re-validate every library rule on its source commit");
    cmd_verify->add_option("--corpus-file", verify_corpus,
                           "commit records (.jsonl); default <out>/corpus/commits.jsonl");

    std::vector<std::string> stages;
    auto* cmd_run = app.add_subcommand("run", "run a stage chain");
    cmd_run->add_option("--stages", stages, "ordered stages (default mine..rules)")
        ->delimiter(',');
    cmd_run->add_option("--corpus", corpus_dir, "directory of raw-commit .jsonl files");
    cmd_run->add_flag("--no-llm-verify", no_llm_verify, "keyword filter only");
    cmd_run->add_option("--target", targets, "source file(s) for scan/optimize");
    cmd_run->add_option("--mode", mode_name, "optimize ablation mode");
    cmd_run->add_option("--bench", bench_path, "benchmark tasks for eval");
    cmd_run->add_option("--kb", kb_path, "knowledge base for eval");
    cmd_run->add_option("--approach", approach, "eval approach");
    cmd_run->add_flag("--degraded", degraded, "eval: exclude same-repo knowledge");
    cmd_run->add_option("--repeats", repeats, "eval: generations per task");
    std::string run_perf_manifest, run_perf_baseline, run_perf_function = "function";
    std::vector<std::string> run_perf_variants;
    int run_perf_runs = 6;
    cmd_run->add_option("--perf-manifest", run_perf_manifest, "perf stage: project manifest");
    cmd_run->add_option("--perf-baseline", run_perf_baseline, "perf stage: baseline directory");
    cmd_run->add_option("--perf-variant", run_perf_variants, "perf stage: variant directories");
    cmd_run->add_option("--perf-function", run_perf_function, "perf stage: function name");
    cmd_run->add_option("--perf-runs", run_perf_runs, "perf stage: executions per variant");

    // --- perf subcommands ---
    auto* cmd_perf = app.add_subcommand("perf", "performance measurement harness");
    cmd_perf->require_subcommand(1);

    std::string profile_path;
    double threshold = 0.001;
    auto* perf_hotspots = cmd_perf->add_subcommand("hotspots", "profile fractions above threshold");
    perf_hotspots->add_option("--profile", profile_path, "profile JSON")->required();
    perf_hotspots->add_option("--threshold", threshold, "self-time fraction floor")
        ->capture_default_str();

    std::string perf_manifest, variant_dir, baseline_dir, perf_function = "function";
    std::string out_file;
    int runs = 6;
    auto* perf_run = cmd_perf->add_subcommand("run", "measure a variant (6 runs, first dropped)");
    perf_run->add_option("--manifest", perf_manifest, "project manifest JSON")->required();
    perf_run->add_option("--variant", variant_dir, "variant directory")->required();
    perf_run->add_option("--baseline", baseline_dir, "baseline directory for before/after pairing");
    perf_run->add_option("--runs", runs, "perf executions")->capture_default_str();
    perf_run->add_option("--function", perf_function, "function the variant belongs to")
        ->capture_default_str();
    perf_run->add_option("--out-file", out_file, "write the result JSON here too");

    std::string reports_dir;
    auto* perf_combine = cmd_perf->add_subcommand("combine", "pick per-function winners");
    perf_combine->add_option("--reports", reports_dir, "directory of variant report JSONs")
        ->required();
    perf_combine->add_option("--out-file", out_file, "write the selection JSON here too");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_log_level(g.log_level_name);
        g.seed_given = seed_opt->count() > 0;

        if (perf_hotspots->parsed()) {
            auto profile = load_profile(profile_path);
            json names = json::array();
            for (const std::string& n : identify_hotspots(profile, threshold)) names.push_back(n);
            std::cout << dump_canonical(json{{"hotspots", names}, {"threshold", threshold}});
            return 0;
        }
        if (perf_run->parsed()) {
            PerfManifest pm = PerfManifest::load(perf_manifest);
            MeasureResult variant = measure_variant(pm, variant_dir, runs);
            json out = variant.to_json();
            if (!baseline_dir.empty() && variant.ok) {
                MeasureResult baseline = measure_variant(pm, baseline_dir, runs);
                out["baseline"] = baseline.to_json();
                if (baseline.ok) {
                    VariantReport vr =
                        make_variant_report(perf_function, fs::path(variant_dir).filename().string(),
                                            pair_measurements(baseline, variant));
                    out["report"] = vr.to_json();
                }
            }
            std::cout << dump_canonical(out);
            if (!out_file.empty()) write_json_file(out_file, out);
            return variant.ok ? 0 : 1;
        }
        if (perf_combine->parsed()) {
            std::map<std::string, std::vector<VariantReport>> by_function;
            std::vector<std::string> files;
            for (const auto& e : fs::directory_iterator(reports_dir))
                if (e.is_regular_file() && e.path().extension() == ".json")
                    files.push_back(e.path().string());
            std::sort(files.begin(), files.end());
            for (const std::string& f : files) {
                json doc = read_json_file(f);
                const json& rj = doc.contains("report") ? doc["report"] : doc;
                if (!rj.contains("measurements")) continue;  // unmeasurable variant
                VariantReport vr = VariantReport::from_json(rj, f);
                by_function[vr.function_name].push_back(std::move(vr));
            }
            json sel = json::object();
            for (const auto& [fn, vid] : combine_variants(by_function)) sel[fn] = vid;
            json out{{"selection", sel}};
            std::cout << dump_canonical(out);
            if (!out_file.empty()) write_json_file(out_file, out);
            return 0;
        }

        StageContext ctx = make_context(g);
        ctx.corpus_dir = corpus_dir;
        ctx.llm_verify = !no_llm_verify;
        ctx.targets = targets;
        ctx.mode = ablation_mode_from_name(mode_name);
        ctx.bench_path = bench_path;
        ctx.kb_path = kb_path;
        ctx.approach = approach;
        ctx.degraded = degraded;
        ctx.repeats = repeats;
        ctx.perf_manifest_path = run_perf_manifest;
        ctx.perf_baseline_dir = run_perf_baseline;
        ctx.perf_variant_dirs = run_perf_variants;
        ctx.perf_function = run_perf_function;
        ctx.perf_runs = run_perf_runs;

        if (cmd_mine->parsed()) run_stages({"mine"}, ctx);
        else if (cmd_summarize->parsed()) run_stages({"summarize"}, ctx);
        else if (cmd_cluster->parsed()) run_stages({"cluster"}, ctx);
        else if (cmd_rules->parsed()) run_stages({"rules"}, ctx);
        else if (cmd_scan->parsed()) run_stages({"scan"}, ctx);
        else if (cmd_optimize->parsed()) run_stages({"optimize"}, ctx);
        else if (cmd_eval->parsed()) run_stages({"eval"}, ctx);
        else if (cmd_verify->parsed()) {
            std::string corpus_file =
                verify_corpus.empty() ? ctx.run_dir + "/corpus/commits.jsonl" : verify_corpus;
            auto failing = verify_library(ctx.run_dir + "/library", corpus_file,
                                          ctx.config.engine_path, ctx.run_dir + "/verify-work");
            json out{{"failing_rules", failing}};
            std::cout << dump_canonical(out);
            if (!failing.empty()) return 1;
        } else if (cmd_run->parsed()) {
            if (stages.empty()) stages = {"mine", "summarize", "cluster", "rules"};
            run_stages(stages, ctx);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "strat-forge: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "strat-forge: error: " << e.what() << "\n";
        return 1;
    }
}
