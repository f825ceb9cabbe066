#pragma once

#include <optional>

#include "gametree/eval.hpp"
#include "gametree/game.hpp"
#include "gametree/search_core.hpp"
#include "gametree/trace.hpp"

namespace gametree {

/// Partial game tree for the two-player search. Values live in a dense
/// store indexed by StateId; a state can carry initialized values (set when
/// a parent expansion first sees it) without being a member of the tree
/// yet. Members are the visited states plus terminal children of visited
/// states; progress accounting counts members only.
struct SearchTree2P {
    explicit SearchTree2P(const GameGraph& g);

    std::vector<FixedPoint> v;
    std::vector<std::int8_t> c;      // completed value: -1 loss, 0 unknown/draw, +1 win
    std::vector<std::uint8_t> r;     // resolution flag
    std::vector<std::uint8_t> init;  // store entry is meaningful
    std::vector<std::uint8_t> member;
    std::vector<std::vector<std::uint32_t>> visits;  // n(s,s'), aligned with children(s)
    std::size_t member_count = 0;
};

/// Lexicographic completed-value selection among candidate children of s:
/// player 1 maximizes (c, v, +-n), player 2 minimizes (c, v, -+n); the
/// visit-count sign follows the tie preference so both players prefer
/// explored children at decision time and unexplored ones during descent.
/// Candidates must be children of s with initialized store entries.
StateId completed_best_action(const GameGraph& g, const SearchTree2P& tree, StateId s,
                              const std::vector<StateId>& candidates, TiePreference pref);

/// Resolution rule: a state is resolved when its (already backed-up)
/// completed value is a win or loss, or when every child is resolved.
bool backup_resolution(const GameGraph& g, const SearchTree2P& tree, StateId s);

/// One best-first iteration from s: terminal -> exact value; unexpanded ->
/// add s, initialize all children (terminal children join the tree with
/// their exact values) and back s up; expanded -> descend into the dual
/// selection among unresolved children, then back up the walk.
IterationTrace ubfm_iteration(const GameGraph& g, SearchTree2P& tree, StateId s,
                              const EvalFn& eval, const TerminalEval& ft,
                              std::int64_t iter = 1);

/// One deep iteration from s: expansion keeps descending while the new
/// state is unresolved, reaching a terminal or resolved state, then backs
/// up the whole walk.
IterationTrace descent_iteration(const GameGraph& g, SearchTree2P& tree, StateId s,
                                 const EvalFn& eval, const TerminalEval& ft,
                                 std::int64_t iter = 1);

enum class Algo2P { kUbfm, kDescent };

struct Solve2POptions {
    bool collect_traces = false;
    double max_seconds = 0.0;  // 0 = no wall-clock cap; budget is the bound
};

struct Solve2PResult {
    bool resolved = false;
    bool timed_out = false;
    std::int8_t c_root = 0;
    FixedPoint v_root;
    std::int64_t iterations = 0;
    std::size_t nodes = 0;  // tree membership at the end
    std::optional<StateId> best_child;
    std::vector<IterationTrace> traces;
};

/// Runs iterations from root until it resolves or the budget runs out.
/// Rejects non-2-player games and budgets < 1 with std::invalid_argument.
Solve2PResult solve2p(const GameGraph& g, StateId root, Algo2P algo, std::int64_t budget,
                      const EvalFn& eval, const TerminalEval& ft, const Solve2POptions& opts = {});

}  // namespace gametree
