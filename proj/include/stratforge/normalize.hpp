#pragma once

#include <string>
#include <string_view>

namespace stratforge {

// Exact-match normalization: strip // and /* */ comments (string- and
// char-literal aware, non-nesting), then remove every whitespace character —
// including whitespace inside string literals, since both sides of a
// comparison are normalized identically. An unterminated block comment is
// stripped to end of input with a warning.
//
// Idempotent for code whose comment structure survives one pass; the known
// exception is text where whitespace removal glues '/' and '*' into a new
// comment opener (e.g. "a = b / *p;"), which real code exercised here avoids.
std::string normalize_code(std::string_view code);

// normalize_code equality.
bool exact_match(std::string_view generated, std::string_view ground_truth);

} // namespace stratforge
