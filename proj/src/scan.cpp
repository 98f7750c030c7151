#include "stratforge/scan.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <set>

#include "stratforge/error.hpp"
#include "stratforge/function_scan.hpp"
#include "stratforge/parallel.hpp"
#include "stratforge/rule_engine.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

namespace fs = std::filesystem;

std::vector<ScanHit> scan_targets(const StrategyLibrary& lib,
                                  const std::vector<std::string>& target_paths,
                                  const std::string& engine_path, const std::string& work_dir,
                                  int workers) {
    std::vector<const AnalysisRule*> rules;
    for (const AnalysisRule& r : lib.rules)
        if (r.status == RuleStatus::Validated) rules.push_back(&r);
    if (rules.empty() || target_paths.empty()) return {};

    fs::create_directories(work_dir);
    std::vector<std::vector<ScanHit>> per_rule(rules.size());
    parallel_for(rules.size(), static_cast<std::size_t>(workers < 1 ? 1 : workers),
                 [&](std::size_t i) {
                     const AnalysisRule& rule = *rules[i];
                     std::string rule_path = work_dir + "/" + rule.rule_id + ".yaml";
                     write_text_file_atomic(rule_path, rule.yaml_text);
                     EngineResult er = run_rule_engine(engine_path, rule_path, target_paths);
                     if (!er.ok()) {
                         log_warn("scan: rule " + rule.rule_id + " skipped: " +
                                  (er.error_text.empty()
                                       ? "engine exit " + std::to_string(er.exit_code)
                                       : er.error_text));
                         return;
                     }
                     for (const EngineFinding& f : er.findings) {
                         ScanHit h;
                         h.rule_id = rule.rule_id;
                         h.cluster_id = rule.cluster_id;
                         h.file_path = f.path;
                         h.start_line = f.start_line;
                         h.end_line = f.end_line;
                         per_rule[i].push_back(std::move(h));
                     }
                 });

    std::vector<ScanHit> hits;
    for (auto& v : per_rule) hits.insert(hits.end(), v.begin(), v.end());
    std::sort(hits.begin(), hits.end(), [](const ScanHit& a, const ScanHit& b) {
        if (a.file_path != b.file_path) return a.file_path < b.file_path;
        if (a.start_line != b.start_line) return a.start_line < b.start_line;
        if (a.end_line != b.end_line) return a.end_line < b.end_line;
        return a.rule_id < b.rule_id;
    });
    return hits;
}

FunctionLookup make_function_lookup() {
    auto cache = std::make_shared<std::map<std::string, std::vector<FunctionSpan>>>();
    return [cache](const std::string& file, int line) -> FunctionRef {
        auto it = cache->find(file);
        if (it == cache->end()) {
            std::vector<FunctionSpan> spans;
            try {
                spans = scan_functions(read_text_file(file));
            } catch (const std::exception& e) {
                log_warn("function lookup: " + file + ": " + e.what());
            }
            it = cache->emplace(file, std::move(spans)).first;
        }
        for (const FunctionSpan& s : it->second)
            if (s.start_line <= line && line <= s.end_line)
                return {s.name, s.start_line, s.end_line};
        return {"", 0, 0};
    };
}

namespace {

struct Group {
    std::string file;
    int start = 0;
    int end = 0;
    std::set<std::string> rule_ids;
    std::map<std::string, std::set<std::string>> rules_by_cluster;
};

}  // namespace

std::vector<RankedLocation> aggregate_and_rank(const std::vector<ScanHit>& hits, int top_k,
                                               const FunctionLookup& func_of) {
    if (top_k < 1) throw Error("top_k must be >= 1");

    // Per file, sweep hits in start order and merge anything overlapping the
    // open group. Inclusive ranges: [1,3] and [3,5] share line 3 and merge;
    // [1,3] and [4,5] are only adjacent and stay apart.
    std::map<std::string, std::vector<ScanHit>> by_file;
    for (const ScanHit& h : hits) by_file[h.file_path].push_back(h);

    std::vector<Group> groups;
    for (auto& [file, fhits] : by_file) {
        std::sort(fhits.begin(), fhits.end(), [](const ScanHit& a, const ScanHit& b) {
            if (a.start_line != b.start_line) return a.start_line < b.start_line;
            return a.end_line < b.end_line;
        });
        Group* open = nullptr;
        for (const ScanHit& h : fhits) {
            if (open == nullptr || h.start_line > open->end) {
                groups.push_back({file, h.start_line, h.end_line, {}, {}});
                open = &groups.back();
            }
            open->end = std::max(open->end, h.end_line);
            open->rule_ids.insert(h.rule_id);
            open->rules_by_cluster[h.cluster_id].insert(h.rule_id);
        }
    }

    struct Entry {
        RankedLocation loc;
        std::string bucket;  // file + enclosing function identity
    };
    std::vector<Entry> entries;
    for (const Group& g : groups) {
        RankedLocation loc;
        loc.file_path = g.file;
        loc.start_line = g.start;
        loc.end_line = g.end;
        loc.hit_count = static_cast<int>(g.rule_ids.size());
        std::size_t best = 0;
        for (const auto& [cid, rids] : g.rules_by_cluster) {
            if (rids.size() > best) {
                best = rids.size();
                loc.cluster_id = cid;
            }
            // std::map iterates ids ascending, so the first maximum already is
            // the lexicographically smallest tied cluster.
        }
        FunctionRef fn = func_of(g.file, g.start);
        loc.function_name = fn.name;
        const std::string sep(1, '\0');
        entries.push_back({std::move(loc),
                           g.file + sep + fn.name + sep + std::to_string(fn.start_line)});
    }

    // Per-function top_k by (hit_count desc, start_line asc).
    std::map<std::string, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < entries.size(); ++i) buckets[entries[i].bucket].push_back(i);
    std::vector<bool> keep(entries.size(), false);
    for (auto& [_, idxs] : buckets) {
        std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
            const RankedLocation& x = entries[a].loc;
            const RankedLocation& y = entries[b].loc;
            if (x.hit_count != y.hit_count) return x.hit_count > y.hit_count;
            return x.start_line < y.start_line;
        });
        for (std::size_t r = 0; r < idxs.size() && r < static_cast<std::size_t>(top_k); ++r)
            keep[idxs[r]] = true;
    }

    std::vector<RankedLocation> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (keep[i]) out.push_back(entries[i].loc);
    std::sort(out.begin(), out.end(), [](const RankedLocation& a, const RankedLocation& b) {
        if (a.file_path != b.file_path) return a.file_path < b.file_path;
        if (a.hit_count != b.hit_count) return a.hit_count > b.hit_count;
        if (a.start_line != b.start_line) return a.start_line < b.start_line;
        return a.end_line < b.end_line;
    });
    return out;
}

} // namespace stratforge
