#include "stratforge/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include "stratforge/bm25.hpp"
#include "stratforge/diff.hpp"
#include "stratforge/error.hpp"
#include "stratforge/normalize.hpp"
#include "stratforge/optimize.hpp"
#include "stratforge/parallel.hpp"
#include "stratforge/prompts.hpp"
#include "stratforge/scan.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

namespace fs = std::filesystem;

std::string approach_name(ApproachKind k) {
    switch (k) {
        case ApproachKind::Direct: return "direct";
        case ApproachKind::RAG: return "rag";
        case ApproachKind::StrategyLib: return "strategy-lib";
    }
    throw Error("unknown approach");
}

ApproachKind approach_from_name(const std::string& name) {
    if (name == "direct") return ApproachKind::Direct;
    if (name == "rag") return ApproachKind::RAG;
    if (name == "strategy-lib") return ApproachKind::StrategyLib;
    throw ConfigError("unknown approach '" + name + "' (direct, rag, strategy-lib)");
}

json BenchReport::to_json() const {
    json tasks_json = json::array();
    for (const TaskRecord& t : tasks) {
        json reps = json::array();
        for (const TaskRepeatRecord& r : t.repeats)
            reps.push_back(json{{"repeat_index", r.repeat_index},
                                {"generated", r.generated},
                                {"em", r.em},
                                {"error", r.error}});
        tasks_json.push_back(json{{"repo_id", t.repo_id},
                                  {"commit_hash", t.commit_hash},
                                  {"solved", t.solved},
                                  {"repeats", reps}});
    }
    return json{{"approach", approach},  {"degraded", degraded}, {"repeats", repeats},
                {"total", total},        {"solved", solved},     {"parameters", parameters},
                {"tasks", tasks_json}};
}

std::vector<BenchTask> load_bench(const std::string& path) {
    std::vector<BenchTask> tasks;
    auto lines = read_jsonl_file(path);
    for (std::size_t i = 0; i < lines.size(); ++i)
        tasks.push_back(BenchTask::from_json(lines[i], path + " record " + std::to_string(i + 1)));
    return tasks;
}

namespace {

// The longest fenced block is the generated solution; none means the attempt
// produced nothing scoreable.
std::pair<bool, std::string> extract_solution(const std::string& response) {
    auto blocks = extract_fenced_blocks(response);
    if (blocks.empty()) return {false, ""};
    std::size_t pick = 0;
    for (std::size_t i = 1; i < blocks.size(); ++i)
        if (blocks[i].body.size() > blocks[pick].body.size()) pick = i;
    return {true, blocks[pick].body};
}

std::vector<CommitRecord> filter_kb(const std::vector<CommitRecord>& kb, const BenchTask& task,
                                    bool degraded) {
    std::vector<CommitRecord> out;
    for (const CommitRecord& c : kb) {
        if (c.commit_hash == task.commit_hash) continue;
        if (c.code_before == task.code_before) continue;
        if (degraded && c.repo_id == task.repo_id) continue;
        out.push_back(c);
    }
    return out;
}

StrategyLibrary filter_library(const StrategyLibrary& lib, const BenchTask& task, bool degraded) {
    StrategyLibrary out;
    out.index = lib.index;
    out.clusters = lib.clusters;
    for (const AnalysisRule& r : lib.rules) {
        if (r.source_commit == task.commit_hash) continue;
        if (degraded && !r.source_repo.empty() && r.source_repo == task.repo_id) continue;
        out.rules.push_back(r);
    }
    return out;
}

struct TaskContext {
    const BenchTask* task = nullptr;
    std::string work_dir;
    // Strategy-library approach: prompts are fixed across repeats, so the
    // scan runs once per task.
    std::vector<std::string> prompts;  // one per ranked location (non-strategy modes: size 1)
    std::string prep_error;
};

}  // namespace

BenchReport run_benchmark(const std::vector<BenchTask>& tasks, ApproachKind kind, bool degraded,
                          int repeats, CompletionProvider& provider,
                          const std::vector<CommitRecord>& knowledge_base,
                          const StrategyLibrary* lib, const PipelineConfig& config,
                          const std::string& out_dir) {
    if (repeats < 1) throw Error("repeats must be >= 1");
    if (kind == ApproachKind::StrategyLib && lib == nullptr)
        throw Error("strategy-lib approach needs a library");

    fs::create_directories(out_dir + "/review");

    BenchReport report;
    report.approach = approach_name(kind);
    report.degraded = degraded;
    report.repeats = repeats;
    report.total = static_cast<int>(tasks.size());
    report.parameters = json{{"bm25_k", 4}, {"bm25_k1", 1.2}, {"bm25_b", 0.75},
                             {"top_k_locations", config.top_k_locations}};

    // Per-task preparation: exclusion filters, retrieval, scans, prompt text.
    std::vector<TaskContext> ctx(tasks.size());
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        TaskContext& tc = ctx[ti];
        tc.task = &tasks[ti];
        tc.work_dir = out_dir + "/work/task-" + std::to_string(ti + 1);
        fs::create_directories(tc.work_dir);
        const BenchTask& task = tasks[ti];
        try {
            if (kind == ApproachKind::Direct) {
                tc.prompts.push_back(direct_prompt(task.code_before));
            } else if (kind == ApproachKind::RAG) {
                auto kb = filter_kb(knowledge_base, task, degraded);
                auto retrieved = bm25_retrieve(task.code_before, kb, 4);
                std::vector<std::pair<std::string, std::string>> examples;
                for (const auto& r : retrieved)
                    examples.emplace_back(r.record.code_before, r.record.code_after);
                tc.prompts.push_back(rag_prompt(examples, task.code_before));
            } else {
                StrategyLibrary filtered = filter_library(*lib, task, degraded);
                std::string target = tc.work_dir + "/task.cpp";
                write_text_file_atomic(target, task.code_before);
                auto hits = scan_targets(filtered, {target}, config.engine_path,
                                         tc.work_dir + "/rules", config.workers);
                auto locations =
                    aggregate_and_rank(hits, config.top_k_locations, make_function_lookup());
                std::map<std::string, std::string> strategy_by_cluster;
                for (const StrategyCluster& c : filtered.clusters)
                    strategy_by_cluster[c.cluster_id] = c.strategy_text;
                for (const RankedLocation& loc : locations)
                    tc.prompts.push_back(build_optimization_prompt(
                        task.code_before, loc, strategy_by_cluster[loc.cluster_id],
                        AblationMode::Full));
                if (tc.prompts.empty()) tc.prep_error = "no rule matched the task code";
            }
        } catch (const std::exception& e) {
            tc.prep_error = e.what();
        }
    }

    // Generation: tasks x repeats, isolated, merged in task order.
    report.tasks.resize(tasks.size());
    struct RepeatResult {
        TaskRepeatRecord rec;
        std::string generated_code;
    };
    std::vector<std::vector<RepeatResult>> results(tasks.size());
    for (auto& v : results) v.resize(static_cast<std::size_t>(repeats));

    std::size_t n_jobs = tasks.size() * static_cast<std::size_t>(repeats);
    parallel_for(n_jobs, static_cast<std::size_t>(config.workers < 1 ? 1 : config.workers),
                 [&](std::size_t jobi) {
                     std::size_t ti = jobi / static_cast<std::size_t>(repeats);
                     int rep = static_cast<int>(jobi % static_cast<std::size_t>(repeats)) + 1;
                     const TaskContext& tc = ctx[ti];
                     RepeatResult& rr = results[ti][static_cast<std::size_t>(rep - 1)];
                     rr.rec.repeat_index = rep;
                     if (!tc.prep_error.empty()) {
                         rr.rec.error = tc.prep_error;
                         return;
                     }
                     try {
                         for (const std::string& prompt : tc.prompts) {
                             std::string response = provider.complete(prompt);
                             auto [got, code] = extract_solution(response);
                             if (!got) continue;
                             rr.rec.generated = true;
                             if (rr.generated_code.empty()) rr.generated_code = code;
                             if (exact_match(code, tc.task->code_after)) {
                                 rr.rec.em = true;
                                 rr.generated_code = code;
                                 break;
                             }
                         }
                         if (!rr.rec.generated) rr.rec.error = "no code block in any response";
                     } catch (const ReplayMiss&) {
                         throw;
                     } catch (const std::exception& e) {
                         rr.rec.error = e.what();
                     }
                 });

    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        TaskRecord& tr = report.tasks[ti];
        tr.repo_id = tasks[ti].repo_id;
        tr.commit_hash = tasks[ti].commit_hash;
        for (int rep = 1; rep <= repeats; ++rep) {
            const RepeatResult& rr = results[ti][static_cast<std::size_t>(rep - 1)];
            tr.repeats.push_back(rr.rec);
            tr.solved = tr.solved || rr.rec.em;
            if (rr.rec.generated) {
                char tag[32];
                std::snprintf(tag, sizeof tag, "task-%03zu-r%d", ti + 1, rep);
                std::string stem = out_dir + "/review/" + tag;
                write_text_file_atomic(
                    stem + "-generated.diff",
                    make_unified_diff(tasks[ti].code_before, rr.generated_code));
                write_text_file_atomic(
                    stem + "-truth.diff",
                    make_unified_diff(tasks[ti].code_before, tasks[ti].code_after));
            }
        }
        if (tr.solved) ++report.solved;
    }

    write_json_file(out_dir + "/report.json", report.to_json());
    return report;
}

} // namespace stratforge
