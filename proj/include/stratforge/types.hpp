#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stratforge/json_io.hpp"

namespace stratforge {

enum class Language { C, CPP };
std::string language_name(Language lang);
Language language_from_name(const std::string& name);

// One mined commit: the unit the whole pipeline operates on. code_before and
// code_after are the complete function bodies; diff is regenerated at function
// granularity so applying it to code_before yields code_after.
struct CommitRecord {
    std::string repo_id;
    std::string commit_hash;  // 40 lowercase hex chars
    std::string message;
    std::string function_name;
    std::string code_before;
    std::string code_after;
    std::string diff;
    Language language = Language::CPP;

    void validate() const;  // throws Error on any broken invariant
    json to_json() const;
    static CommitRecord from_json(const json& j, const std::string& ctx);
};

struct StrategySummary {
    std::string commit_hash;
    std::string text;  // the selected candidate
    Eigen::VectorXd embedding;  // unit norm
    std::vector<std::string> candidate_texts;

    void validate() const;
    json to_json() const;
    static StrategySummary from_json(const json& j, const std::string& ctx);
};

struct StrategyCluster {
    std::string cluster_id;  // "c" + first 12 hex of SHA-256 over sorted member hashes
    std::string strategy_text;  // medoid member's summary
    std::vector<std::string> member_hashes;
    int size = 0;

    json to_json() const;
    static StrategyCluster from_json(const json& j, const std::string& ctx);
};

enum class RuleStatus { Validated, Failed };
std::string rule_status_name(RuleStatus s);
RuleStatus rule_status_from_name(const std::string& name);

struct AnalysisRule {
    std::string rule_id;
    std::string cluster_id;
    std::string source_commit;
    std::string source_repo;  // provenance for same-repo exclusion in degraded evaluation
    std::string yaml_text;
    int attempt_index = 1;    // 1..n_attempts
    int iterations_used = 1;  // 1..max_iterations
    RuleStatus status = RuleStatus::Failed;

    json meta_to_json() const;  // everything except yaml_text (stored as its own file)
    static AnalysisRule meta_from_json(const json& j, const std::string& ctx);
};

struct PipelineConfig {
    int m_summaries = 3;
    double eps_sim = 0.89;
    int min_cluster_size = 3;
    int n_sample_commits = 10;
    int n_attempts = 5;
    int max_iterations = 7;
    int top_k_locations = 25;
    double temperature = 0;
    int min_pts = 2;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string engine_path = "semgrep";
    std::string endpoint;   // live provider base URL
    std::string model;      // live provider model id
    std::string api_key_env = "STRAT_FORGE_API_KEY";

    void validate() const;
    json to_json() const;
    static PipelineConfig from_json(const json& j);  // unknown keys rejected
};

struct ScanHit {
    std::string rule_id;
    std::string cluster_id;
    std::string file_path;
    int start_line = 1;  // 1-based, inclusive
    int end_line = 1;

    json to_json() const;
    static ScanHit from_json(const json& j, const std::string& ctx);
};

struct RankedLocation {
    std::string file_path;
    std::string function_name;
    int start_line = 1;
    int end_line = 1;
    std::string cluster_id;
    int hit_count = 1;  // distinct rules matching this merged location

    bool operator==(const RankedLocation&) const = default;
    json to_json() const;
    static RankedLocation from_json(const json& j, const std::string& ctx);
};

enum class AblationMode { Full, NoLocation, NoStrategy };
std::string ablation_mode_name(AblationMode m);
AblationMode ablation_mode_from_name(const std::string& name);

struct OptimizationCandidate {
    std::string file_path;
    std::string function_name;
    int start_line = 1;
    int end_line = 1;
    std::string strategy_text;
    std::string original_code;
    std::string optimized_code;
    std::string diff;
    AblationMode ablation_mode = AblationMode::Full;

    json to_json() const;
};

struct BenchTask {
    std::string repo_id;
    std::string commit_hash;
    std::string code_before;  // tool input
    std::string code_after;   // ground truth

    void validate() const;
    json to_json() const;
    static BenchTask from_json(const json& j, const std::string& ctx);
};

// Eigen vector <-> JSON array helpers used by summaries and replay scripts.
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j, const std::string& ctx);

} // namespace stratforge
