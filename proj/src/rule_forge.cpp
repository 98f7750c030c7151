#include "stratforge/rule_forge.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "stratforge/error.hpp"
#include "stratforge/hash.hpp"
#include "stratforge/parallel.hpp"
#include "stratforge/prompts.hpp"
#include "stratforge/rng.hpp"
#include "stratforge/rule_engine.hpp"
#include "stratforge/rule_yaml.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

namespace fs = std::filesystem;

std::string attempt_outcome_name(AttemptOutcome o) {
    switch (o) {
        case AttemptOutcome::Validated: return "Validated";
        case AttemptOutcome::ExhaustedIterations: return "ExhaustedIterations";
        case AttemptOutcome::EngineUnavailable: return "EngineUnavailable";
    }
    throw Error("unknown attempt outcome");
}

json AttemptTrace::to_json() const {
    json t = json::array();
    for (const auto& [prompt, response] : transcript)
        t.push_back(json{{"prompt", prompt}, {"response", response}});
    return json{{"commit_hash", commit_hash},
                {"attempt_index", attempt_index},
                {"rule_id", rule_id},
                {"transcript", t},
                {"engine_errors", engine_errors},
                {"outcome", attempt_outcome_name(outcome)},
                {"iterations_used", iterations_used},
                {"yaml_text", yaml_text}};
}

std::uint64_t cluster_seed(std::uint64_t seed, const std::string& cluster_id) {
    std::string digest = sha256_hex(std::to_string(seed) + ":" + cluster_id);
    return std::stoull(digest.substr(0, 16), nullptr, 16);
}

std::vector<CommitRecord> sample_commits(const StrategyCluster& cluster,
                                         const std::map<std::string, CommitRecord>& commits_by_hash,
                                         int n, std::uint64_t seed) {
    if (n < 1) throw Error("sample size must be >= 1");
    std::vector<std::string> hashes = cluster.member_hashes;
    std::sort(hashes.begin(), hashes.end());
    auto picks = sample_indices(hashes.size(), static_cast<std::size_t>(n), seed);
    std::vector<CommitRecord> out;
    out.reserve(picks.size());
    for (std::size_t idx : picks) {
        auto it = commits_by_hash.find(hashes[idx]);
        if (it == commits_by_hash.end())
            throw Error("cluster " + cluster.cluster_id + " references unknown commit " + hashes[idx]);
        out.push_back(it->second);
    }
    return out;
}

namespace {

// Candidate extraction from a phase-2/3 response: exactly one yaml-tagged
// fenced block (falling back to untagged blocks when none is tagged).
// Returns (yaml, "") on success or ("", error) as the iteration's failure.
std::pair<std::string, std::string> extract_candidate(const std::string& response) {
    std::vector<std::string> candidates;
    for (const auto& b : extract_fenced_blocks(response)) {
        std::string lang = to_lower(trim(b.info));
        if (lang == "yaml" || lang == "yml") candidates.push_back(b.body);
    }
    if (candidates.empty()) {
        for (const auto& b : extract_fenced_blocks(response))
            if (trim(b.info).empty()) candidates.push_back(b.body);
    }
    if (candidates.empty())
        return {"", "no rule block: the response must contain exactly one fenced YAML rule"};
    if (candidates.size() > 1)
        return {"", "multiple rule blocks: the response must contain exactly one fenced YAML rule"};
    return {candidates[0], ""};
}

std::string target_file_name(const CommitRecord& commit) {
    return commit.language == Language::C ? "target.c" : "target.cpp";
}

}  // namespace

AttemptTrace run_attempt(const CommitRecord& commit, int attempt_index,
                         const std::string& rule_id, const PipelineConfig& config,
                         CompletionProvider& provider, const std::string& work_dir,
                         std::atomic<long>* engine_runs) {
    AttemptTrace tr;
    tr.commit_hash = commit.commit_hash;
    tr.attempt_index = attempt_index;
    tr.rule_id = rule_id;

    fs::create_directories(work_dir);
    std::string target_path = work_dir + "/" + target_file_name(commit);
    write_text_file_atomic(target_path, commit.code_before);
    std::string rule_path = work_dir + "/rule.yaml";

    auto ask = [&](const std::string& prompt) {
        std::string response = provider.complete(prompt);
        tr.transcript.emplace_back(prompt, response);
        return response;
    };

    try {
        // Phase 1: understand. No rule output allowed here.
        std::string analysis = ask(understand_prompt(commit));
        if (trim(analysis).empty()) {
            tr.engine_errors.push_back("provider returned an empty analysis");
            return tr;
        }
        auto [stripped, removed_yaml] = strip_fenced_blocks(analysis, "yaml");
        auto [stripped2, removed_yml] = strip_fenced_blocks(stripped, "yml");
        if (removed_yaml || removed_yml) {
            log_warn("attempt " + rule_id + ": analysis contained a fenced rule; stripped");
            analysis = stripped2;
        }
        if (trim(analysis).empty()) {
            tr.engine_errors.push_back("analysis was nothing but a rule block");
            return tr;
        }

        // Phase 2: first candidate.
        std::string response = ask(generate_prompt(analysis, commit));
        std::string current_yaml;

        // Phase 3: validate/repair. Every pass through the loop consumes one
        // iteration, whether it reaches the engine or dies at extraction.
        for (int iter = 1; iter <= config.max_iterations; ++iter) {
            tr.iterations_used = iter;
            auto [candidate, extract_error] = extract_candidate(response);
            std::string error;
            if (!extract_error.empty()) {
                error = extract_error;
            } else {
                try {
                    current_yaml = rewrite_rule_id(candidate, rule_id);
                } catch (const std::exception&) {
                    // Unparseable candidate: hand it to the engine as-is so the
                    // repair feedback is the engine's own diagnostic.
                    current_yaml = candidate;
                }
                tr.yaml_text = current_yaml;
                write_text_file_atomic(rule_path, current_yaml);
                EngineResult er = run_rule_engine(config.engine_path, rule_path, {target_path});
                if (engine_runs) engine_runs->fetch_add(1);
                if (er.engine_missing) {
                    tr.outcome = AttemptOutcome::EngineUnavailable;
                    tr.engine_errors.push_back(er.error_text.empty() ? "rule engine not executable"
                                                                     : er.error_text);
                    return tr;
                }
                if (er.ok() && !er.findings.empty()) {
                    tr.outcome = AttemptOutcome::Validated;
                    return tr;
                }
                if (!er.ok()) {
                    error = er.error_text.empty()
                                ? "engine exited with code " + std::to_string(er.exit_code)
                                : er.error_text;
                } else {
                    error = "rule produced zero findings on the known-optimizable code";
                }
            }
            tr.engine_errors.push_back(error);
            if (iter == config.max_iterations) break;
            response = ask(repair_prompt(current_yaml, error, commit));
        }
        tr.outcome = AttemptOutcome::ExhaustedIterations;
        return tr;
    } catch (const ReplayMiss&) {
        throw;  // scripted run asked an unscripted question: test bug, not an outcome
    } catch (const ProviderError& e) {
        tr.engine_errors.push_back(std::string("provider failure: ") + e.what());
        tr.outcome = AttemptOutcome::ExhaustedIterations;
        return tr;
    }
}

ForgeResult build_rule_set(const StrategyCluster& cluster,
                           const std::map<std::string, CommitRecord>& commits_by_hash,
                           const PipelineConfig& config, CompletionProvider& provider,
                           const std::string& work_dir) {
    if (cluster.member_hashes.empty()) throw Error("cannot build rules for an empty cluster");
    std::vector<CommitRecord> sampled =
        sample_commits(cluster, commits_by_hash, config.n_sample_commits,
                       cluster_seed(config.seed, cluster.cluster_id));

    struct Job {
        std::size_t commit_idx;
        int attempt;
    };
    std::vector<Job> jobs;
    for (std::size_t ci = 0; ci < sampled.size(); ++ci)
        for (int a = 1; a <= config.n_attempts; ++a) jobs.push_back({ci, a});

    std::vector<AttemptTrace> traces(jobs.size());
    std::atomic<long> engine_runs{0};
    parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
        const Job& jb = jobs[i];
        const CommitRecord& commit = sampled[jb.commit_idx];
        std::string commit8 = commit.commit_hash.substr(0, 8);
        std::string rid = cluster.cluster_id + "-" + commit8 + "-a" + std::to_string(jb.attempt);
        std::string wd = work_dir + "/" + commit8 + "-a" + std::to_string(jb.attempt);
        traces[i] = run_attempt(commit, jb.attempt, rid, config, provider, wd, &engine_runs);
    });

    std::vector<std::size_t> order(traces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (traces[a].commit_hash != traces[b].commit_hash)
            return traces[a].commit_hash < traces[b].commit_hash;
        return traces[a].attempt_index < traces[b].attempt_index;
    });

    ForgeResult result;
    result.engine_runs = engine_runs.load();
    std::set<std::string> seen_keys;
    for (std::size_t i : order) {
        const AttemptTrace& tr = traces[i];
        result.traces.push_back(tr);
        if (tr.outcome != AttemptOutcome::Validated) continue;
        std::string key;
        try {
            key = rule_dedupe_key(tr.yaml_text);
        } catch (const std::exception&) {
            key = tr.yaml_text;
        }
        if (!seen_keys.insert(key).second) continue;
        AnalysisRule rule;
        rule.rule_id = tr.rule_id;
        rule.cluster_id = cluster.cluster_id;
        rule.source_commit = tr.commit_hash;
        auto it = commits_by_hash.find(tr.commit_hash);
        rule.source_repo = it == commits_by_hash.end() ? "" : it->second.repo_id;
        rule.yaml_text = tr.yaml_text;
        rule.attempt_index = tr.attempt_index;
        rule.iterations_used = tr.iterations_used;
        rule.status = RuleStatus::Validated;
        result.rules.push_back(std::move(rule));
    }
    return result;
}

} // namespace stratforge
