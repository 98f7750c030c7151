#include "stratforge/diff.hpp"

#include <algorithm>

#include "stratforge/error.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

namespace {

struct SplitText {
    std::vector<std::string> lines;
    bool trailing_newline = true;
};

SplitText split_keep_final(const std::string& s) {
    SplitText st;
    st.lines = split_lines(s);
    st.trailing_newline = s.empty() || s.back() == '\n';
    return st;
}

// Comparison keys: the final line of a file without a trailing newline gets a
// sentinel suffix so "x" vs "x\n" diff as a changed line, not as equal.
std::vector<std::string> line_keys(const SplitText& st) {
    std::vector<std::string> keys = st.lines;
    if (!keys.empty() && !st.trailing_newline) keys.back() += std::string("\x00<nonl>", 7);
    return keys;
}

struct EditOp {
    char op;  // ' ' keep, '-' delete, '+' insert
    int ai;
    int bi;
};

// Myers O(ND) shortest edit script over line keys.
std::vector<EditOp> myers_diff(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int max_d = n + m;
    std::vector<std::vector<int>> trace;
    std::vector<int> v(static_cast<size_t>(2 * max_d + 2), 0);
    auto idx = [max_d](int k) { return static_cast<size_t>(k + max_d); };

    int found_d = -1;
    for (int d = 0; d <= max_d && found_d < 0; ++d) {
        trace.push_back(v);
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && v[idx(k - 1)] < v[idx(k + 1)]))
                x = v[idx(k + 1)];
            else
                x = v[idx(k - 1)] + 1;
            int y = x - k;
            while (x < n && y < m && a[static_cast<size_t>(x)] == b[static_cast<size_t>(y)]) {
                ++x;
                ++y;
            }
            v[idx(k)] = x;
            if (x >= n && y >= m) {
                found_d = d;
                break;
            }
        }
    }

    std::vector<EditOp> ops;
    int x = n, y = m;
    for (int d = found_d; d > 0; --d) {
        const std::vector<int>& pv = trace[static_cast<size_t>(d)];
        int k = x - y;
        int prev_k = (k == -d || (k != d && pv[idx(k - 1)] < pv[idx(k + 1)])) ? k + 1 : k - 1;
        int prev_x = pv[idx(prev_k)];
        int prev_y = prev_x - prev_k;
        // snake back to the point just after the d-1 -> d step
        int step_x = prev_k == k + 1 ? prev_x : prev_x + 1;
        int step_y = step_x - k;
        while (x > step_x && y > step_y) {
            --x;
            --y;
            ops.push_back({' ', x, y});
        }
        if (prev_k == k + 1) {
            --y;
            ops.push_back({'+', x, y});
        } else {
            --x;
            ops.push_back({'-', x, y});
        }
        x = prev_x;
        y = prev_y;
    }
    while (x > 0 && y > 0) {
        --x;
        --y;
        ops.push_back({' ', x, y});
    }
    while (x > 0) {
        --x;
        ops.push_back({'-', x, 0});
    }
    while (y > 0) {
        --y;
        ops.push_back({'+', 0, y});
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

} // namespace

std::string make_unified_diff(const std::string& before, const std::string& after,
                              const std::string& old_path, const std::string& new_path,
                              int context) {
    if (before == after) return "";
    SplitText a = split_keep_final(before);
    SplitText b = split_keep_final(after);
    std::vector<EditOp> ops = myers_diff(line_keys(a), line_keys(b));

    struct Region {
        size_t first_op;
        size_t last_op;
    };
    std::vector<Region> regions;
    for (size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].op == ' ') continue;
        if (!regions.empty() && i - regions.back().last_op - 1 <= static_cast<size_t>(2 * context)) {
            regions.back().last_op = i;
            continue;
        }
        regions.push_back({i, i});
    }
    if (regions.empty()) return "";

    const int an = static_cast<int>(a.lines.size());
    const int bn = static_cast<int>(b.lines.size());
    auto needs_marker = [&](const EditOp& op) {
        if (op.op == '-') return op.ai == an - 1 && !a.trailing_newline;
        if (op.op == '+') return op.bi == bn - 1 && !b.trailing_newline;
        return op.ai == an - 1 && !a.trailing_newline;  // keep: keys matched, both sides agree
    };

    std::string out = "--- " + old_path + "\n+++ " + new_path + "\n";
    for (const Region& r : regions) {
        size_t from = r.first_op > static_cast<size_t>(context)
                          ? r.first_op - static_cast<size_t>(context)
                          : 0;
        size_t to = std::min(ops.size() - 1, r.last_op + static_cast<size_t>(context));

        int old_start = 0, new_start = 0, old_count = 0, new_count = 0;
        for (size_t i = from; i <= to; ++i) {
            if (ops[i].op != '+') {
                if (old_count == 0) old_start = ops[i].ai + 1;
                ++old_count;
            }
            if (ops[i].op != '-') {
                if (new_count == 0) new_start = ops[i].bi + 1;
                ++new_count;
            }
        }
        if (old_count == 0) old_start = ops[from].ai;  // insertion point convention
        if (new_count == 0) new_start = ops[from].bi;

        out += "@@ -" + std::to_string(old_start) + "," + std::to_string(old_count) + " +" +
               std::to_string(new_start) + "," + std::to_string(new_count) + " @@\n";
        for (size_t i = from; i <= to; ++i) {
            const EditOp& op = ops[i];
            const std::string& line = op.op == '+' ? b.lines[static_cast<size_t>(op.bi)]
                                                   : a.lines[static_cast<size_t>(op.ai)];
            out += op.op;
            out += line;
            out += '\n';
            if (needs_marker(op)) out += "\\ No newline at end of file\n";
        }
    }
    return out;
}

std::vector<FileDiff> parse_unified_diff(const std::string& diff) {
    std::vector<FileDiff> files;
    std::vector<std::string> lines = split_lines(diff);

    auto strip_prefix = [](const std::string& p) {
        if (starts_with(p, "a/") || starts_with(p, "b/")) return p.substr(2);
        return p;
    };

    size_t i = 0;
    while (i < lines.size()) {
        const std::string& line = lines[i];
        int lineno = static_cast<int>(i) + 1;
        if (starts_with(line, "--- ")) {
            if (i + 1 >= lines.size() || !starts_with(lines[i + 1], "+++ "))
                throw ParseError("'---' header without '+++'", lineno);
            FileDiff fd;
            std::string oldp = line.substr(4);
            std::string newp = lines[i + 1].substr(4);
            fd.old_path = strip_prefix(oldp.substr(0, oldp.find('\t')));
            fd.new_path = strip_prefix(newp.substr(0, newp.find('\t')));
            files.push_back(std::move(fd));
            i += 2;
            continue;
        }
        if (starts_with(line, "@@")) {
            if (files.empty()) files.push_back(FileDiff{});  // header-less diff
            DiffHunk h;
            size_t close = line.find("@@", 2);
            if (close == std::string::npos) throw ParseError("malformed hunk header", lineno);
            std::string ranges = trim(line.substr(2, close - 2));
            h.section = trim(line.substr(close + 2));
            size_t sp = ranges.find(' ');
            if (sp == std::string::npos || ranges.empty() || ranges[0] != '-' ||
                sp + 1 >= ranges.size() || ranges[sp + 1] != '+')
                throw ParseError("malformed hunk ranges", lineno);
            auto parse_range = [&](const std::string& r, int& start, int& count) {
                size_t comma = r.find(',');
                try {
                    if (comma == std::string::npos) {
                        start = std::stoi(r);
                        count = 1;
                    } else {
                        start = std::stoi(r.substr(0, comma));
                        count = std::stoi(r.substr(comma + 1));
                    }
                } catch (const std::exception&) {
                    throw ParseError("malformed hunk range number", lineno);
                }
            };
            parse_range(ranges.substr(1, sp - 1), h.old_start, h.old_count);
            parse_range(ranges.substr(sp + 2), h.new_start, h.new_count);

            ++i;
            int seen_old = 0, seen_new = 0;
            while (i < lines.size() && (seen_old < h.old_count || seen_new < h.new_count)) {
                const std::string& bl = lines[i];
                lineno = static_cast<int>(i) + 1;
                if (bl.empty()) {
                    h.lines.push_back(" ");  // some tools emit bare empty context lines
                    ++seen_old;
                    ++seen_new;
                    ++i;
                    continue;
                }
                char op = bl[0];
                if (op == '\\') {
                    h.lines.push_back(bl);
                    ++i;
                    continue;
                }
                if (op != ' ' && op != '-' && op != '+')
                    throw ParseError("unexpected line in hunk body", lineno);
                if (op != '+') ++seen_old;
                if (op != '-') ++seen_new;
                h.lines.push_back(bl);
                ++i;
            }
            if (seen_old != h.old_count || seen_new != h.new_count)
                throw ParseError("hunk body shorter than its header counts",
                                 static_cast<int>(i));
            if (i < lines.size() && !lines[i].empty() && lines[i][0] == '\\') {
                h.lines.push_back(lines[i]);
                ++i;
            }
            files.back().hunks.push_back(std::move(h));
            continue;
        }
        ++i;  // prose between files (git headers, index lines)
    }
    if (files.empty()) throw ParseError("no hunks found", 1);
    return files;
}

std::string apply_unified_diff(const std::string& original, const std::string& diff) {
    if (trim(diff).empty()) return original;
    std::vector<FileDiff> files = parse_unified_diff(diff);
    if (files.size() != 1) throw ParseError("apply expects a single-file diff", 1);

    SplitText orig = split_keep_final(original);
    std::vector<std::string> out;
    size_t cursor = 0;  // next original line to copy, 0-based
    bool marker_on_new_side = false;

    for (const DiffHunk& h : files[0].hunks) {
        size_t hunk_begin = h.old_count == 0 ? static_cast<size_t>(h.old_start)
                                             : static_cast<size_t>(h.old_start - 1);
        if (hunk_begin < cursor || hunk_begin > orig.lines.size())
            throw ParseError("hunk overlaps previous hunk or exceeds file", h.old_start);
        while (cursor < hunk_begin) out.push_back(orig.lines[cursor++]);

        for (size_t li = 0; li < h.lines.size(); ++li) {
            const std::string& bl = h.lines[li];
            char op = bl[0];
            if (op == '\\') {
                if (li == 0) throw ParseError("dangling no-newline marker", h.old_start);
                char prev = h.lines[li - 1][0];
                if (prev == '+' || prev == ' ') marker_on_new_side = true;
                continue;
            }
            std::string body = bl.substr(1);
            if (op == ' ' || op == '-') {
                if (cursor >= orig.lines.size() || orig.lines[cursor] != body)
                    throw ParseError("hunk does not match original at line " +
                                         std::to_string(cursor + 1),
                                     h.old_start);
                if (op == ' ') out.push_back(orig.lines[cursor]);
                ++cursor;
            } else {
                out.push_back(body);
            }
        }
    }
    bool tail_copied = cursor < orig.lines.size();
    while (cursor < orig.lines.size()) out.push_back(orig.lines[cursor++]);

    bool trailing = tail_copied ? orig.trailing_newline : !marker_on_new_side;
    std::string result = join(out, "\n");
    if (!out.empty() && trailing) result += '\n';
    return result;
}

} // namespace stratforge
