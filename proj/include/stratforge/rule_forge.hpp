#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stratforge/providers.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

enum class AttemptOutcome { Validated, ExhaustedIterations, EngineUnavailable };
std::string attempt_outcome_name(AttemptOutcome o);

// Full record of one agent attempt: understand -> generate -> validate/repair.
struct AttemptTrace {
    std::string commit_hash;
    int attempt_index = 1;
    std::string rule_id;
    std::vector<std::pair<std::string, std::string>> transcript;  // (prompt, response)
    std::vector<std::string> engine_errors;
    AttemptOutcome outcome = AttemptOutcome::ExhaustedIterations;
    int iterations_used = 0;
    std::string yaml_text;  // last candidate; the validated rule when outcome == Validated

    json to_json() const;
};

// Deterministic per-cluster RNG seed: the global seed and cluster id hashed
// together, so adding a cluster never perturbs another cluster's sample.
std::uint64_t cluster_seed(std::uint64_t seed, const std::string& cluster_id);

// min(n, size) distinct members via a seeded shuffle of the hash-sorted
// member list. Throws if a member hash has no commit record.
std::vector<CommitRecord> sample_commits(const StrategyCluster& cluster,
                                         const std::map<std::string, CommitRecord>& commits_by_hash,
                                         int n, std::uint64_t seed);

// One independent attempt against one commit. `work_dir` is private to the
// attempt (rule + target files for engine runs). Each engine invocation
// increments *engine_runs when given. Provider failures abort the attempt;
// a replay miss propagates (it is a script bug, not an outcome).
AttemptTrace run_attempt(const CommitRecord& commit, int attempt_index,
                         const std::string& rule_id, const PipelineConfig& config,
                         CompletionProvider& provider, const std::string& work_dir,
                         std::atomic<long>* engine_runs = nullptr);

struct ForgeResult {
    std::vector<AnalysisRule> rules;   // Validated only, deduped, merge order
    std::vector<AttemptTrace> traces;  // every attempt, (commit hash, attempt) order
    long engine_runs = 0;
};

// All (sampled commit, attempt) pairs for one cluster. Attempts share no
// state and may run on config.workers threads; results are merged in
// (commit hash, attempt_index) order and byte-identical rule texts (ignoring
// the rule id) are collapsed to the first occurrence.
ForgeResult build_rule_set(const StrategyCluster& cluster,
                           const std::map<std::string, CommitRecord>& commits_by_hash,
                           const PipelineConfig& config, CompletionProvider& provider,
                           const std::string& work_dir);

} // namespace stratforge
