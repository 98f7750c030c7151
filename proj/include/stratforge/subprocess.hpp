#pragma once

#include <string>
#include <vector>

namespace stratforge {

struct ProcessResult {
    int exit_code = -1;    // -1: killed by signal / never ran
    bool exec_failed = false;  // binary missing or not executable
    std::string out;
    std::string err;
};

// fork/exec with captured stdout/stderr. argv[0] is resolved via PATH.
// A failed exec is reported via exec_failed (exit_code 127), not an exception,
// because callers distinguish "engine missing" from "engine rejected input".
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& cwd = "");

} // namespace stratforge
