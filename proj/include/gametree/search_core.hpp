#pragma once

#include <cstdint>
#include <vector>

#include "gametree/game.hpp"
#include "gametree/trace.hpp"

namespace gametree {

/// Child-selection tie preference on the visit-count key. Decision-time
/// selection prefers well-explored children (+n); the in-search dual
/// selection prefers unexplored ones (-n). Residual ties always go to the
/// smallest child id.
enum class TiePreference { kPreferExplored, kPreferUnexplored };

namespace detail {

/// Best-first iteration, expanding shape: walk down through already
/// expanded states along dual-selected unresolved children, stop at the
/// first terminal or unexpanded state (expanding it), then back up every
/// state the walk passed through, deepest first.
///
/// Engine contract: is_terminal/is_member/resolved predicates,
/// set_terminal (adds a terminal to the tree with its exact value),
/// expand (adds a state, initializes all children, then backs it up),
/// backup (recomputes value and resolution from the children, recording
/// flips), unresolved_children (indices into the child list), select_dual,
/// bump (visit-count increment) and child_at.
template <class Engine>
IterationTrace best_first_iteration(Engine& e, StateId root, std::int64_t iter) {
    IterationTrace t;
    t.iter = iter;
    std::vector<StateId> unwind;
    StateId s = root;
    for (;;) {
        t.path.push_back(s);
        if (e.is_terminal(s)) {
            e.set_terminal(s, t);
            break;
        }
        if (!e.is_member(s)) {
            e.expand(s, t);
            break;
        }
        unwind.push_back(s);
        auto cand = e.unresolved_children(s);
        if (cand.empty()) break;
        std::size_t idx = e.select_dual(s, cand);
        e.bump(s, idx);
        s = e.child_at(s, idx);
    }
    for (auto it = unwind.rbegin(); it != unwind.rend(); ++it) e.backup(*it, &t);
    return t;
}

/// Deep iteration shape: like the best-first shape, but the walk keeps
/// going through freshly expanded states while they remain unresolved, so
/// a single iteration drills down to a terminal or resolved state.
template <class Engine>
IterationTrace descent_iteration_shape(Engine& e, StateId root, std::int64_t iter) {
    IterationTrace t;
    t.iter = iter;
    std::vector<StateId> unwind;
    StateId s = root;
    for (;;) {
        t.path.push_back(s);
        if (e.is_terminal(s)) {
            e.set_terminal(s, t);
            break;
        }
        if (!e.is_member(s)) e.expand(s, t);
        if (e.resolved(s)) break;
        auto cand = e.unresolved_children(s);
        if (cand.empty()) {
            // A transposition resolved the last unresolved child through a
            // different parent; re-running the backup resolves this state.
            e.backup(s, &t);
            break;
        }
        std::size_t idx = e.select_dual(s, cand);
        e.bump(s, idx);
        unwind.push_back(s);
        s = e.child_at(s, idx);
    }
    for (auto it = unwind.rbegin(); it != unwind.rend(); ++it) e.backup(*it, &t);
    return t;
}

}  // namespace detail

}  // namespace gametree
