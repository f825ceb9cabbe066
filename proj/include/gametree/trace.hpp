#pragma once

#include <string>
#include <vector>

#include "gametree/game.hpp"

namespace gametree {

/// What one search iteration did: which states joined the tree, which had
/// their resolution flag flipped 0->1, and the descent path from the root.
struct IterationTrace {
    std::int64_t iter = 0;
    std::vector<StateId> added;
    std::vector<StateId> flips;
    std::vector<StateId> path;
};

/// One-line JSON record: {"iter":k,"added":[..],"flips":[..],"path":[..]}.
/// Multiplayer traces append ,"variant":"v1"|"v2" before the brace.
std::string trace_json_line(const IterationTrace& t, const char* variant = nullptr);

struct TraceCheckResult {
    bool ok = true;
    std::string error;  // first violation, with the offending line number
};

/// Sanity-checks a stream of trace lines against the structural rules:
/// parseable records, strictly increasing iteration numbers, no state added
/// twice, no state flipped twice, and every line reporting progress (a
/// non-empty added or flips list).
TraceCheckResult check_trace_lines(const std::string& text, StateId num_states);

}  // namespace gametree
