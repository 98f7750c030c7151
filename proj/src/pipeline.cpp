#include "stratforge/pipeline.hpp"

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <map>
#include <set>

#include "stratforge/bench.hpp"
#include "stratforge/cluster.hpp"
#include "stratforge/error.hpp"
#include "stratforge/hash.hpp"
#include "stratforge/library_store.hpp"
#include "stratforge/miner.hpp"
#include "stratforge/optimize.hpp"
#include "stratforge/perf.hpp"
#include "stratforge/rule_engine.hpp"
#include "stratforge/rule_forge.hpp"
#include "stratforge/scan.hpp"
#include "stratforge/summarize.hpp"
#include "stratforge/text.hpp"
#include "stratforge/version.hpp"

namespace stratforge {

namespace fs = std::filesystem;

const std::vector<std::string> kAllStages = {"mine", "summarize", "cluster", "rules",
                                             "scan", "optimize",  "eval",    "perf"};

namespace {

std::string file_sha256(const std::string& path) { return sha256_hex(read_text_file(path)); }

json provider_identity(const StageContext& ctx) {
    if (ctx.providers.replay)
        return json{{"mode", "replay"}, {"script_sha256", ctx.providers.replay_script_hash}};
    return json{{"mode", "live"},
                {"endpoint", ctx.config.endpoint},
                {"model", ctx.config.model}};
}

json make_manifest(const std::string& stage, const StageContext& ctx, const json& inputs) {
    // Replay runs pin the timestamp so identical runs are byte-identical.
    std::int64_t created =
        ctx.providers.replay ? 0 : static_cast<std::int64_t>(std::time(nullptr));
    return json{{"tool_version", kVersion},
                {"stage", stage},
                {"config", ctx.config.to_json()},
                {"seed", ctx.config.seed},
                {"provider", provider_identity(ctx)},
                {"inputs", inputs},
                {"created_unix", created}};
}

// A stage is skippable when its previous manifest agrees on everything except
// the timestamp and stats, and every expected output still exists.
bool stage_unchanged(const std::string& manifest_path, const json& fresh,
                     const std::vector<std::string>& outputs) {
    if (!fs::exists(manifest_path)) return false;
    for (const std::string& out : outputs)
        if (!fs::exists(out)) return false;
    json old;
    try {
        old = read_json_file(manifest_path);
    } catch (const std::exception&) {
        return false;
    }
    for (const char* key : {"tool_version", "stage", "config", "seed", "provider", "inputs"}) {
        if (!old.contains(key)) return false;
        if (old[key] != fresh.at(key)) return false;
    }
    return true;
}

void require_artifact(const std::string& path, const std::string& consumer,
                      const std::string& producer) {
    if (!fs::exists(path))
        throw Error("stage '" + consumer + "' needs " + path + " — run stage '" + producer +
                    "' first");
}

std::vector<CommitRecord> read_commit_records(const std::string& jsonl_path) {
    std::vector<CommitRecord> records;
    auto lines = read_jsonl_file(jsonl_path);
    for (std::size_t i = 0; i < lines.size(); ++i)
        records.push_back(
            CommitRecord::from_json(lines[i], jsonl_path + " record " + std::to_string(i + 1)));
    return records;
}

}  // namespace

void stage_mine(StageContext& ctx) {
    if (ctx.corpus_dir.empty()) throw ConfigError("mine: a corpus directory is required");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(ctx.corpus_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ConfigError("mine: no .jsonl files under " + ctx.corpus_dir);

    json inputs = json::object();
    for (const std::string& f : files) inputs[f] = file_sha256(f);

    std::string out_dir = ctx.run_dir + "/corpus";
    std::string out_path = out_dir + "/commits.jsonl";
    std::string manifest_path = out_dir + "/manifest.json";
    json manifest = make_manifest("mine", ctx, inputs);
    if (stage_unchanged(manifest_path, manifest, {out_path})) {
        log_info("mine: inputs unchanged, skipped");
        return;
    }

    auto raw = load_corpus(ctx.corpus_dir);
    MineStats stats;
    CompletionProvider* verifier = ctx.llm_verify ? ctx.providers.completion.get() : nullptr;
    auto records = mine_corpus(raw, default_keywords(), verifier, &stats);

    std::vector<json> lines;
    lines.reserve(records.size());
    for (const CommitRecord& r : records) lines.push_back(r.to_json());
    fs::create_directories(out_dir);
    write_jsonl_file(out_path, lines);
    manifest["stats"] = json{{"total", stats.total},
                             {"keyword_matched", stats.keyword_matched},
                             {"single_function", stats.single_function},
                             {"llm_verified", stats.llm_verified},
                             {"after_dedupe", stats.after_dedupe}};
    write_json_file(manifest_path, manifest);
    log_info("mine: " + std::to_string(records.size()) + " commits kept of " +
             std::to_string(stats.total));
}

void stage_summarize(StageContext& ctx) {
    std::string in_path = ctx.run_dir + "/corpus/commits.jsonl";
    require_artifact(in_path, "summarize", "mine");
    json inputs = json{{in_path, file_sha256(in_path)}};

    std::string out_dir = ctx.run_dir + "/summaries";
    std::string out_path = out_dir + "/summaries.json";
    std::string manifest_path = out_dir + "/manifest.json";
    json manifest = make_manifest("summarize", ctx, inputs);
    if (stage_unchanged(manifest_path, manifest, {out_path})) {
        log_info("summarize: inputs unchanged, skipped");
        return;
    }

    auto records = read_commit_records(in_path);
    SummarizeResult result = summarize_all(records, *ctx.providers.completion,
                                           *ctx.providers.embedding, ctx.config.m_summaries);
    json doc;
    json arr = json::array();
    for (const StrategySummary& s : result.summaries) arr.push_back(s.to_json());
    doc["summaries"] = arr;
    doc["unsummarized"] = result.unsummarized;
    fs::create_directories(out_dir);
    write_json_file(out_path, doc);
    manifest["stats"] = json{{"summarized", result.summaries.size()},
                             {"unsummarized", result.unsummarized.size()}};
    write_json_file(manifest_path, manifest);
    log_info("summarize: " + std::to_string(result.summaries.size()) + " summaries");
}

void stage_cluster(StageContext& ctx) {
    std::string in_path = ctx.run_dir + "/summaries/summaries.json";
    require_artifact(in_path, "cluster", "summarize");
    json inputs = json{{in_path, file_sha256(in_path)}};

    std::string out_dir = ctx.run_dir + "/clusters";
    std::string out_path = out_dir + "/clusters.json";
    std::string manifest_path = out_dir + "/manifest.json";
    json manifest = make_manifest("cluster", ctx, inputs);
    if (stage_unchanged(manifest_path, manifest, {out_path})) {
        log_info("cluster: inputs unchanged, skipped");
        return;
    }

    json in_doc = read_json_file(in_path);
    std::vector<StrategySummary> summaries;
    for (const json& s : in_doc.at("summaries"))
        summaries.push_back(StrategySummary::from_json(s, in_path));

    ClusterResult cr = cluster_summaries(summaries, ctx.config.eps_sim, ctx.config.min_pts);
    auto pruned = prune_clusters(cr.clusters, summaries, ctx.config.min_cluster_size);
    std::set<std::string> kept;
    for (const StrategyCluster& c : pruned) kept.insert(c.cluster_id);
    std::vector<std::string> dropped;
    for (const StrategyCluster& c : cr.clusters)
        if (!kept.count(c.cluster_id)) dropped.push_back(c.cluster_id);

    json doc;
    json arr = json::array();
    for (const StrategyCluster& c : pruned) arr.push_back(c.to_json());
    doc["clusters"] = arr;
    doc["dropped"] = dropped;
    doc["noise"] = cr.noise;
    fs::create_directories(out_dir);
    write_json_file(out_path, doc);
    manifest["stats"] = json{{"clusters", pruned.size()},
                             {"dropped", dropped.size()},
                             {"noise", cr.noise.size()}};
    write_json_file(manifest_path, manifest);
    log_info("cluster: " + std::to_string(pruned.size()) + " clusters, " +
             std::to_string(cr.noise.size()) + " noise points");
}

void stage_rules(StageContext& ctx) {
    std::string clusters_path = ctx.run_dir + "/clusters/clusters.json";
    std::string corpus_path = ctx.run_dir + "/corpus/commits.jsonl";
    require_artifact(clusters_path, "rules", "cluster");
    require_artifact(corpus_path, "rules", "mine");
    json inputs = json{{clusters_path, file_sha256(clusters_path)},
                       {corpus_path, file_sha256(corpus_path)}};

    std::string library_root = ctx.run_dir + "/library";
    std::string work_root = ctx.run_dir + "/rules-work";
    std::string manifest_path = library_root + "/manifest.json";
    json manifest = make_manifest("rules", ctx, inputs);
    if (stage_unchanged(manifest_path, manifest, {library_root + "/index.json"})) {
        log_info("rules: inputs unchanged, skipped");
        return;
    }

    json cdoc = read_json_file(clusters_path);
    std::vector<StrategyCluster> clusters;
    for (const json& c : cdoc.at("clusters"))
        clusters.push_back(StrategyCluster::from_json(c, clusters_path));

    std::map<std::string, CommitRecord> by_hash;
    for (CommitRecord& r : read_commit_records(corpus_path)) by_hash.emplace(r.commit_hash, r);

    StrategyLibrary lib;
    lib.clusters = clusters;
    long engine_runs = 0;
    std::vector<json> trace_lines;
    for (const StrategyCluster& cluster : clusters) {
        ForgeResult fr = build_rule_set(cluster, by_hash, ctx.config, *ctx.providers.completion,
                                        work_root + "/" + cluster.cluster_id);
        engine_runs += fr.engine_runs;
        for (const AttemptTrace& t : fr.traces) {
            json tj = t.to_json();
            tj["cluster_id"] = cluster.cluster_id;
            trace_lines.push_back(std::move(tj));
        }
        if (fr.rules.empty()) {
            lib.index.ruleless_clusters.push_back(cluster.cluster_id);
            log_warn("rules: cluster " + cluster.cluster_id + " produced no validated rule");
        }
        for (AnalysisRule& r : fr.rules) lib.rules.push_back(std::move(r));
    }

    lib.index.version = kVersion;
    lib.index.config_snapshot = ctx.config.to_json();
    lib.index.seed = ctx.config.seed;
    lib.index.embedder_id = ctx.providers.embedding ? ctx.providers.embedding->id() : "";
    lib.index.embedding_dim = ctx.providers.embedding ? ctx.providers.embedding->dimension() : 0;
    lib.index.eps_distance = 1.0 - ctx.config.eps_sim;

    library_store_write(library_root, lib);
    fs::create_directories(work_root);
    write_jsonl_file(work_root + "/traces.jsonl", trace_lines);
    manifest["stats"] = json{{"rules", lib.rules.size()},
                             {"ruleless_clusters", lib.index.ruleless_clusters.size()},
                             {"engine_runs", engine_runs}};
    write_json_file(manifest_path, manifest);
    log_info("rules: " + std::to_string(lib.rules.size()) + " validated rules, " +
             std::to_string(engine_runs) + " engine runs");
}

void stage_scan(StageContext& ctx) {
    std::string index_path = ctx.run_dir + "/library/index.json";
    require_artifact(index_path, "scan", "rules");
    if (ctx.targets.empty()) throw ConfigError("scan: at least one target file is required");
    json inputs = json{{index_path, file_sha256(index_path)}};
    for (const std::string& t : ctx.targets) {
        if (!fs::exists(t)) throw ConfigError("scan: target not found: " + t);
        inputs[t] = file_sha256(t);
    }

    std::string out_dir = ctx.run_dir + "/scan";
    std::string hits_path = out_dir + "/hits.json";
    std::string locations_path = out_dir + "/locations.json";
    std::string manifest_path = out_dir + "/manifest.json";
    json manifest = make_manifest("scan", ctx, inputs);
    if (stage_unchanged(manifest_path, manifest, {hits_path, locations_path})) {
        log_info("scan: inputs unchanged, skipped");
        return;
    }

    StrategyLibrary lib = library_store_read(ctx.run_dir + "/library");
    auto hits = scan_targets(lib, ctx.targets, ctx.config.engine_path, out_dir + "/work",
                             ctx.config.workers);
    auto locations = aggregate_and_rank(hits, ctx.config.top_k_locations, make_function_lookup());

    json hits_doc;
    json harr = json::array();
    for (const ScanHit& h : hits) harr.push_back(h.to_json());
    hits_doc["hits"] = harr;
    json loc_doc;
    json larr = json::array();
    for (const RankedLocation& l : locations) larr.push_back(l.to_json());
    loc_doc["locations"] = larr;
    fs::create_directories(out_dir);
    write_json_file(hits_path, hits_doc);
    write_json_file(locations_path, loc_doc);
    manifest["stats"] = json{{"hits", hits.size()}, {"locations", locations.size()}};
    write_json_file(manifest_path, manifest);
    log_info("scan: " + std::to_string(hits.size()) + " hits, " +
             std::to_string(locations.size()) + " ranked locations");
}

void stage_optimize(StageContext& ctx) {
    std::string index_path = ctx.run_dir + "/library/index.json";
    std::string locations_path = ctx.run_dir + "/scan/locations.json";
    require_artifact(index_path, "optimize", "rules");
    require_artifact(locations_path, "optimize", "scan");
    json inputs = json{{index_path, file_sha256(index_path)},
                       {locations_path, file_sha256(locations_path)},
                       {"ablation_mode", ablation_mode_name(ctx.mode)}};

    std::string out_dir = ctx.run_dir + "/candidates";
    std::string manifest_path = out_dir + "/manifest.json";
    json manifest = make_manifest("optimize", ctx, inputs);
    if (stage_unchanged(manifest_path, manifest, {})) {
        log_info("optimize: inputs unchanged, skipped");
        return;
    }

    StrategyLibrary lib = library_store_read(ctx.run_dir + "/library");
    std::vector<RankedLocation> locations;
    for (const json& l : read_json_file(locations_path).at("locations"))
        locations.push_back(RankedLocation::from_json(l, locations_path));

    OptimizeStats stats = optimize_locations(lib, locations, ctx.mode, *ctx.providers.completion,
                                             out_dir, ctx.config.workers);
    manifest["stats"] = json{{"locations", stats.locations},
                             {"ok", stats.ok},
                             {"no_change", stats.no_change},
                             {"failed", stats.failed}};
    write_json_file(manifest_path, manifest);
    log_info("optimize: " + std::to_string(stats.ok) + " candidates of " +
             std::to_string(stats.locations) + " locations");
}

void stage_eval(StageContext& ctx) {
    if (ctx.bench_path.empty()) throw ConfigError("eval: a benchmark file is required");
    ApproachKind kind = approach_from_name(ctx.approach);
    json inputs = json{{ctx.bench_path, file_sha256(ctx.bench_path)},
                       {"approach", ctx.approach},
                       {"degraded", ctx.degraded},
                       {"repeats", ctx.repeats}};

    std::vector<CommitRecord> kb;
    if (!ctx.kb_path.empty()) {
        kb = read_commit_records(ctx.kb_path);
        inputs[ctx.kb_path] = file_sha256(ctx.kb_path);
    }
    StrategyLibrary lib;
    bool have_lib = false;
    if (kind == ApproachKind::StrategyLib) {
        std::string index_path = ctx.run_dir + "/library/index.json";
        require_artifact(index_path, "eval", "rules");
        inputs[index_path] = file_sha256(index_path);
        lib = library_store_read(ctx.run_dir + "/library");
        have_lib = true;
    }
    if (kind == ApproachKind::RAG && kb.empty())
        throw ConfigError("eval: the rag approach needs a non-empty knowledge base");

    std::string out_dir = ctx.run_dir + "/eval";
    std::string manifest_path = out_dir + "/manifest.json";
    json manifest = make_manifest("eval", ctx, inputs);
    if (stage_unchanged(manifest_path, manifest, {out_dir + "/report.json"})) {
        log_info("eval: inputs unchanged, skipped");
        return;
    }

    auto tasks = load_bench(ctx.bench_path);
    BenchReport report =
        run_benchmark(tasks, kind, ctx.degraded, ctx.repeats, *ctx.providers.completion, kb,
                      have_lib ? &lib : nullptr, ctx.config, out_dir);
    manifest["stats"] = json{{"total", report.total}, {"solved", report.solved}};
    write_json_file(manifest_path, manifest);
    log_info("eval: " + std::to_string(report.solved) + "/" + std::to_string(report.total) +
             " solved (" + report.approach + (report.degraded ? ", degraded" : "") + ")");
}

void stage_perf(StageContext& ctx) {
    if (ctx.perf_manifest_path.empty()) throw ConfigError("perf: a project manifest is required");
    if (ctx.perf_baseline_dir.empty()) throw ConfigError("perf: a baseline directory is required");
    if (ctx.perf_variant_dirs.empty())
        throw ConfigError("perf: at least one variant directory is required");

    PerfManifest pm = PerfManifest::load(ctx.perf_manifest_path);
    std::string out_dir = ctx.run_dir + "/perf";
    fs::create_directories(out_dir + "/reports");

    MeasureResult baseline = measure_variant(pm, ctx.perf_baseline_dir, ctx.perf_runs);
    write_json_file(out_dir + "/baseline.json", baseline.to_json());
    if (!baseline.ok) throw Error("perf: baseline measurement failed: " + baseline.error);

    std::map<std::string, std::vector<VariantReport>> by_function;
    for (const std::string& vdir : ctx.perf_variant_dirs) {
        std::string vid = fs::path(vdir).filename().string();
        MeasureResult mv = measure_variant(pm, vdir, ctx.perf_runs);
        json out = mv.to_json();
        if (mv.ok) {
            VariantReport vr = make_variant_report(ctx.perf_function, vid,
                                                   pair_measurements(baseline, mv));
            out["report"] = vr.to_json();
            by_function[ctx.perf_function].push_back(std::move(vr));
        } else {
            log_warn("perf: variant " + vid + " not measurable: " + mv.error);
        }
        write_json_file(out_dir + "/reports/" + vid + ".json", out);
    }

    auto selection = combine_variants(by_function);
    json sel = json::object();
    for (const auto& [fn, vid] : selection) sel[fn] = vid;
    write_json_file(out_dir + "/selection.json", json{{"selection", sel}});

    json manifest = make_manifest("perf", ctx, json{{ctx.perf_manifest_path,
                                                     file_sha256(ctx.perf_manifest_path)}});
    write_json_file(out_dir + "/manifest.json", manifest);
}

void run_stages(const std::vector<std::string>& stages, StageContext& ctx) {
    if (stages.empty()) throw ConfigError("no stages requested");
    for (const std::string& s : stages)
        if (std::find(kAllStages.begin(), kAllStages.end(), s) == kAllStages.end())
            throw ConfigError("unknown stage '" + s + "'");
    fs::create_directories(ctx.run_dir);
    for (const std::string& s : stages) {
        log_info("stage " + s + " starting");
        if (s == "mine") stage_mine(ctx);
        else if (s == "summarize") stage_summarize(ctx);
        else if (s == "cluster") stage_cluster(ctx);
        else if (s == "rules") stage_rules(ctx);
        else if (s == "scan") stage_scan(ctx);
        else if (s == "optimize") stage_optimize(ctx);
        else if (s == "eval") stage_eval(ctx);
        else stage_perf(ctx);
    }
}

std::vector<std::string> verify_library(const std::string& library_root,
                                        const std::string& corpus_jsonl,
                                        const std::string& engine_path,
                                        const std::string& work_dir) {
    StrategyLibrary lib = library_store_read(library_root);
    std::map<std::string, CommitRecord> by_hash;
    for (CommitRecord& r : read_commit_records(corpus_jsonl)) by_hash.emplace(r.commit_hash, r);

    fs::create_directories(work_dir);
    std::vector<std::string> failing;
    for (const AnalysisRule& rule : lib.rules) {
        auto it = by_hash.find(rule.source_commit);
        if (it == by_hash.end()) {
            log_warn("verify: rule " + rule.rule_id + " has no corpus commit " +
                     rule.source_commit);
            failing.push_back(rule.rule_id);
            continue;
        }
        std::string target = work_dir + "/" + rule.rule_id + ".target.cpp";
        std::string rule_path = work_dir + "/" + rule.rule_id + ".yaml";
        write_text_file_atomic(target, it->second.code_before);
        write_text_file_atomic(rule_path, rule.yaml_text);
        EngineResult er = run_rule_engine(engine_path, rule_path, {target});
        if (!er.ok() || er.findings.empty()) {
            log_warn("verify: rule " + rule.rule_id + " no longer validates" +
                     (er.error_text.empty() ? "" : (": " + er.error_text)));
            failing.push_back(rule.rule_id);
        }
    }
    return failing;
}

} // namespace stratforge
