#include "stratforge/rule_engine.hpp"

#include "stratforge/error.hpp"
#include "stratforge/json_io.hpp"
#include "stratforge/subprocess.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

EngineResult run_rule_engine(const std::string& engine_path,
                             const std::string& rule_path,
                             const std::vector<std::string>& targets) {
    std::vector<std::string> argv = {engine_path, "--config", rule_path, "--json"};
    argv.insert(argv.end(), targets.begin(), targets.end());

    ProcessResult pr = run_process(argv);

    EngineResult res;
    res.exit_code = pr.exit_code;
    res.error_text = trim(pr.err);
    if (pr.exec_failed) {
        res.engine_missing = true;
        return res;
    }
    if (pr.exit_code != 0) return res;

    json doc;
    try {
        doc = parse_json(pr.out, "engine output");
    } catch (const std::exception& e) {
        // A zero exit with unparseable output is still a failed run: the
        // caller needs the error text, not a silent empty finding list.
        res.exit_code = -1;
        res.error_text = std::string("engine emitted invalid JSON: ") + e.what();
        return res;
    }

    for (const auto& r : doc.value("results", json::array())) {
        EngineFinding f;
        f.check_id = r.value("check_id", "");
        f.path = r.value("path", "");
        if (r.contains("start")) f.start_line = r["start"].value("line", 0);
        if (r.contains("end")) f.end_line = r["end"].value("line", 0);
        if (r.contains("extra")) f.message = r["extra"].value("message", "");
        res.findings.push_back(std::move(f));
    }
    return res;
}

}  // namespace stratforge
