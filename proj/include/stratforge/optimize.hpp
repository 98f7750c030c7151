#pragma once

#include <string>
#include <vector>

#include "stratforge/library_store.hpp"
#include "stratforge/providers.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

enum class GenOutcome { Ok, NoChange, GenerationFailed };
std::string gen_outcome_name(GenOutcome o);

// Four-part prompt for one ranked location: numbered full code, the line
// range (dropped under NoLocation), the strategy (dropped under NoStrategy),
// and the apply-and-emit instruction. Throws if the location's range falls
// outside the code.
std::string build_optimization_prompt(const std::string& full_code, const RankedLocation& loc,
                                      const std::string& strategy_text, AblationMode mode);

struct GenerationResult {
    GenOutcome outcome = GenOutcome::GenerationFailed;
    OptimizationCandidate candidate;  // filled only when outcome == Ok
    std::string error;
};

// One provider call: the response's fenced code block becomes optimized_code
// (multiple blocks: longest wins with a warning; none: GenerationFailed).
// A result that matches the original after exact-match normalization is
// NoChange and carries no candidate.
GenerationResult generate_optimization(const std::string& prompt, CompletionProvider& provider,
                                       const std::string& original_code);

struct OptimizeStats {
    int locations = 0;
    int ok = 0;
    int no_change = 0;
    int failed = 0;
};

// Prompt + generate for every ranked location; one candidate JSON and one
// unified diff written per Ok result. Provider calls run on `workers` threads;
// output files are named by deterministic location order.
OptimizeStats optimize_locations(const StrategyLibrary& lib,
                                 const std::vector<RankedLocation>& locations, AblationMode mode,
                                 CompletionProvider& provider, const std::string& out_dir,
                                 int workers);

} // namespace stratforge
