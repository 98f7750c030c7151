#pragma once

#include <string>
#include <vector>

namespace stratforge {

// A function definition located by brace counting, not by parsing C/C++.
// start_line is the line holding the function name; end_line the closing
// brace. Lines are 1-based, inclusive.
struct FunctionSpan {
    std::string name;
    int start_line = 0;
    int end_line = 0;
    int body_open_line = 0;  // line of the opening '{'
};

// Scan source text for top-level function definitions. Comment-, string- and
// char-literal-aware; namespaces/classes/structs are entered transparently.
// Deliberately heuristic: it finds spans, not semantics, so exotic constructs
// (function-try-blocks, macros generating braces) can confuse it.
std::vector<FunctionSpan> scan_functions(const std::string& code);

// Name of the innermost function whose span contains `line`, or "" if none.
std::string function_at_line(const std::vector<FunctionSpan>& spans, int line);

// Exact source text of a span (lines start_line..end_line, trailing newline kept).
std::string slice_lines(const std::string& code, int start_line, int end_line);

} // namespace stratforge
