#include "stratforge/optimize.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "stratforge/diff.hpp"
#include "stratforge/error.hpp"
#include "stratforge/json_io.hpp"
#include "stratforge/normalize.hpp"
#include "stratforge/parallel.hpp"
#include "stratforge/prompts.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

namespace fs = std::filesystem;

std::string gen_outcome_name(GenOutcome o) {
    switch (o) {
        case GenOutcome::Ok: return "Ok";
        case GenOutcome::NoChange: return "NoChange";
        case GenOutcome::GenerationFailed: return "GenerationFailed";
    }
    throw Error("unknown generation outcome");
}

std::string build_optimization_prompt(const std::string& full_code, const RankedLocation& loc,
                                      const std::string& strategy_text, AblationMode mode) {
    int n_lines = static_cast<int>(split_lines(full_code).size());
    if (loc.start_line < 1 || loc.end_line < loc.start_line || loc.end_line > n_lines)
        throw Error("location " + std::to_string(loc.start_line) + ".." +
                    std::to_string(loc.end_line) + " is outside the code (" +
                    std::to_string(n_lines) + " lines)");
    return optimization_prompt(number_lines(full_code), loc.start_line, loc.end_line,
                               strategy_text, mode);
}

GenerationResult generate_optimization(const std::string& prompt, CompletionProvider& provider,
                                       const std::string& original_code) {
    GenerationResult res;
    std::string response = provider.complete(prompt);
    auto blocks = extract_fenced_blocks(response);
    if (blocks.empty()) {
        res.outcome = GenOutcome::GenerationFailed;
        res.error = "response contained no fenced code block";
        return res;
    }
    std::size_t pick = 0;
    for (std::size_t i = 1; i < blocks.size(); ++i)
        if (blocks[i].body.size() > blocks[pick].body.size()) pick = i;
    if (blocks.size() > 1)
        log_warn("optimization response contained " + std::to_string(blocks.size()) +
                 " code blocks; using the longest");
    const std::string& optimized = blocks[pick].body;
    if (exact_match(optimized, original_code)) {
        res.outcome = GenOutcome::NoChange;
        return res;
    }
    res.outcome = GenOutcome::Ok;
    res.candidate.original_code = original_code;
    res.candidate.optimized_code = optimized;
    res.candidate.diff = make_unified_diff(original_code, optimized);
    return res;
}

OptimizeStats optimize_locations(const StrategyLibrary& lib,
                                 const std::vector<RankedLocation>& locations, AblationMode mode,
                                 CompletionProvider& provider, const std::string& out_dir,
                                 int workers) {
    fs::create_directories(out_dir);

    std::map<std::string, std::string> strategy_by_cluster;
    for (const StrategyCluster& c : lib.clusters) strategy_by_cluster[c.cluster_id] = c.strategy_text;

    OptimizeStats stats;
    stats.locations = static_cast<int>(locations.size());

    std::vector<GenerationResult> results(locations.size());
    std::vector<std::string> errors(locations.size());
    parallel_for(locations.size(), static_cast<std::size_t>(workers < 1 ? 1 : workers),
                 [&](std::size_t i) {
                     const RankedLocation& loc = locations[i];
                     try {
                         std::string full_code = read_text_file(loc.file_path);
                         auto sit = strategy_by_cluster.find(loc.cluster_id);
                         std::string strategy =
                             sit == strategy_by_cluster.end() ? "" : sit->second;
                         std::string prompt =
                             build_optimization_prompt(full_code, loc, strategy, mode);
                         results[i] = generate_optimization(prompt, provider, full_code);
                         if (results[i].outcome == GenOutcome::Ok) {
                             OptimizationCandidate& c = results[i].candidate;
                             c.file_path = loc.file_path;
                             c.function_name = loc.function_name;
                             c.start_line = loc.start_line;
                             c.end_line = loc.end_line;
                             c.strategy_text = strategy;
                             c.ablation_mode = mode;
                         }
                     } catch (const ReplayMiss&) {
                         throw;  // an unscripted prompt is a broken replay script
                     } catch (const std::exception& e) {
                         results[i].outcome = GenOutcome::GenerationFailed;
                         results[i].error = e.what();
                     }
                 });

    for (std::size_t i = 0; i < locations.size(); ++i) {
        const GenerationResult& r = results[i];
        char tag[16];
        std::snprintf(tag, sizeof tag, "%04zu", i + 1);
        std::string stem = out_dir + "/candidate-" + tag;
        if (r.outcome == GenOutcome::Ok) {
            ++stats.ok;
            json doc = r.candidate.to_json();
            doc["outcome"] = gen_outcome_name(r.outcome);
            write_json_file(stem + ".json", doc);
            write_text_file_atomic(stem + ".diff", r.candidate.diff);
        } else if (r.outcome == GenOutcome::NoChange) {
            ++stats.no_change;
            log_info("location " + std::to_string(i + 1) + ": no change proposed, discarded");
        } else {
            ++stats.failed;
            log_warn("location " + std::to_string(i + 1) + ": generation failed: " + r.error);
        }
    }
    return stats;
}

} // namespace stratforge
