#pragma once

#include <string>
#include <vector>

namespace stratforge {

// One finding reported by the scan engine.
struct EngineFinding {
    std::string check_id;
    std::string path;
    int start_line = 0;
    int end_line = 0;
    std::string message;
};

// Outcome of a single engine invocation.
//
// A "clean run" means the engine executed and exited 0; it says nothing about
// whether findings were produced. `engine_missing` is the distinct case where
// the binary could not be executed at all.
struct EngineResult {
    bool engine_missing = false;
    int exit_code = -1;
    std::string error_text;  // stderr (or exec error) for repair feedback
    std::vector<EngineFinding> findings;

    bool ok() const { return !engine_missing && exit_code == 0; }
};

// Invoke the engine as `<engine> --config <rule_path> --json <targets...>`
// and parse the findings from stdout.
EngineResult run_rule_engine(const std::string& engine_path,
                             const std::string& rule_path,
                             const std::vector<std::string>& targets);

}  // namespace stratforge
