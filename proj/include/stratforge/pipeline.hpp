#pragma once

#include <string>
#include <vector>

#include "stratforge/providers.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

// Everything a stage needs: config, wired providers, the run directory the
// stage chain reads/writes, and the stage-specific inputs supplied by flags.
struct StageContext {
    PipelineConfig config;
    ProviderBundle providers;
    std::string run_dir;

    std::string corpus_dir;            // mine
    bool llm_verify = true;            // mine: keyword-only when false
    std::vector<std::string> targets;  // scan
    AblationMode mode = AblationMode::Full;  // optimize

    std::string bench_path;  // eval
    std::string kb_path;
    std::string approach = "strategy-lib";
    bool degraded = false;
    int repeats = 3;

    std::string perf_manifest_path;  // perf
    std::string perf_baseline_dir;
    std::vector<std::string> perf_variant_dirs;
    std::string perf_function = "function";
    int perf_runs = 6;
};

extern const std::vector<std::string> kAllStages;  // declared order = canonical chain order

// Execute the named stages in the given order. Each stage hashes the inputs
// it actually reads into a manifest.json beside its outputs (written last);
// re-running a stage whose manifest matches the fresh inputs and whose
// outputs exist is skipped. A missing input artifact raises an error naming
// the stage that produces it.
void run_stages(const std::vector<std::string>& stages, StageContext& ctx);

void stage_mine(StageContext& ctx);
void stage_summarize(StageContext& ctx);
void stage_cluster(StageContext& ctx);
void stage_rules(StageContext& ctx);
void stage_scan(StageContext& ctx);
void stage_optimize(StageContext& ctx);
void stage_eval(StageContext& ctx);
void stage_perf(StageContext& ctx);

// Re-run every persisted rule against its source commit's pre-image and
// report failures: a healthy library re-validates completely. Returns the
// rule_ids that no longer produce a finding.
std::vector<std::string> verify_library(const std::string& library_root,
                                        const std::string& corpus_jsonl,
                                        const std::string& engine_path,
                                        const std::string& work_dir);

} // namespace stratforge
