#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stratforge/library_store.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

// Run every Validated rule in the library against the target files, one engine
// invocation per rule so a single broken rule cannot poison the pass: a rule
// whose run fails is skipped and logged, the scan continues. Hits come back
// sorted by (file, start_line, end_line, rule_id).
std::vector<ScanHit> scan_targets(const StrategyLibrary& lib,
                                  const std::vector<std::string>& target_paths,
                                  const std::string& engine_path, const std::string& work_dir,
                                  int workers = 1);

// Maps a (file, line) to the enclosing function's name and span. Injectable so
// ranking semantics can be exercised against synthetic attributions.
struct FunctionRef {
    std::string name;
    int start_line = 0;  // 0 when no enclosing function
    int end_line = 0;
};
using FunctionLookup = std::function<FunctionRef(const std::string& file, int line)>;

// File-content-based lookup built on the shared function scanner.
FunctionLookup make_function_lookup();

// Overlap-merge hits per file, count distinct rules per merged group, pick the
// group's cluster by rule-count majority (lexicographic tie-break), keep the
// top_k groups per enclosing function by (hit_count desc, start_line asc),
// output sorted by file then rank.
std::vector<RankedLocation> aggregate_and_rank(const std::vector<ScanHit>& hits, int top_k,
                                               const FunctionLookup& func_of);

} // namespace stratforge
