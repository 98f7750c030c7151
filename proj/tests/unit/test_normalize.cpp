#include <doctest.h>

#include <string>
#include <vector>

#include "stratforge/normalize.hpp"

using namespace stratforge;

TEST_CASE("normalization strips comments and every whitespace character") {
    std::string code =
        "int f(int x) { // per-call cost\n"
        "    /* the old\n"
        "       slow path */\n"
        "    return x + 1;\n"
        "}\n";
    CHECK(normalize_code(code) == "intf(intx){returnx+1;}");
}

TEST_CASE("exact match is insensitive to comments and formatting only") {
    std::string a = "int f() {\n    return 42;\n}\n";
    std::string b = "// fast path\nint f() { return 42; }";
    std::string c = "int f() {\n    return 43;\n}\n";
    CHECK(exact_match(a, b));
    CHECK_FALSE(exact_match(a, c));
    CHECK(exact_match(a, a));
}

TEST_CASE("reordered operands are a semantic difference, not formatting") {
    std::string before = "if (expensive(r) && r.flag) { go(); }";
    std::string after = "if (r.flag && expensive(r)) { go(); }";
    CHECK_FALSE(exact_match(before, after));
}

TEST_CASE("comment markers inside string literals survive") {
    std::string code = "const char* s = \"not // a comment\";";
    CHECK(normalize_code(code) == "constchar*s=\"not//acomment\";");
    std::string block = "const char* t = \"keep /* this */\";";
    CHECK(normalize_code(block) == "constchar*t=\"keep/*this*/\";");
    std::string esc = "char c = '\\''; // trailing\nint y;";
    CHECK(normalize_code(esc) == "charc='\\'';inty;");
}

TEST_CASE("whitespace inside string literals is removed on both sides") {
    // both comparands normalize identically, so EM still behaves
    CHECK(exact_match("puts(\"a  b\");", "puts(\"a b\");"));
    CHECK(normalize_code("puts(\"a b\");") == "puts(\"ab\");");
}

TEST_CASE("normalization is idempotent on normalized output") {
    std::vector<std::string> snippets = {
        "int f() { return 1; }",
        "for (int i = 0; i < n; i++) { s += a[i]; }",
        "// only a comment\nint g.",
        "const char* s = \"x /* y */ z\";",
        "int h() { /* multi\nline */ return 2; }",
    };
    for (const std::string& s : snippets) {
        std::string once = normalize_code(s);
        CHECK(normalize_code(once) == once);
    }
}

TEST_CASE("unterminated block comment is stripped to the end") {
    CHECK(normalize_code("int x; /* never closed") == "intx;");
}
