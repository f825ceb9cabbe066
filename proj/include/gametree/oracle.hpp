#pragma once

#include <vector>

#include "gametree/game.hpp"
#include "gametree/eval.hpp"

namespace gametree {

/// Exact two-player game value at every state: +1/0/-1 from player 1's
/// viewpoint, computed by full backward induction in reverse topological
/// order. Requires a valid acyclic two-player game.
std::vector<std::int8_t> minimax(const GameGraph& g);

/// Multiplayer exact value: a (gain vector, eval vector) pair per state.
/// At a non-terminal, the mover picks the child pair maximizing
/// (gain[mover], eval[mover]) lexicographically; residual ties go to the
/// smallest child id. Terminals contribute (f_b, f_t).
struct MaxnValue {
    std::vector<std::int8_t> gain;
    std::vector<FixedPoint> eval;

    friend bool operator==(const MaxnValue&, const MaxnValue&) = default;
};

struct MaxnResult {
    std::vector<MaxnValue> values;  // indexed by StateId
    /// False iff some state had two children with distinct pairs tied on
    /// both keys for the mover: the backed-up value then depends on the
    /// tie-break and is not intrinsic to the game.
    bool unique = true;
};

MaxnResult maxn(const GameGraph& g, const TerminalEval& ft);

}  // namespace gametree
