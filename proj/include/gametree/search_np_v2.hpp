#pragma once

#include <cstdint>
#include <vector>

#include "gametree/eval.hpp"
#include "gametree/game.hpp"
#include "gametree/search_core.hpp"
#include "gametree/search_np_common.hpp"
#include "gametree/trace.hpp"

// Second multiplayer variant: completion values are always propagated from the
// best child (no auxiliary completion vector), selectors are prefixed by the
// resolved-completion product r*c, and resolution additionally requires a
// resolved child carrying the exact same (c, v) pair.

namespace gametree {

struct SearchTreeNP2 {
    int num_players = 0;
    std::vector<std::vector<FixedPoint>> v;   // heuristic value per player
    std::vector<std::vector<std::int8_t>> c;  // completion per player, in {-1,0,1}
    std::vector<std::uint8_t> r;              // resolved flag
    std::vector<std::uint8_t> init;           // has (v,c,r) been written
    std::vector<std::uint8_t> member;         // belongs to the partial game tree
    std::vector<std::vector<std::uint32_t>> visits;  // per-edge selection counts
    std::size_t member_count = 0;

    explicit SearchTreeNP2(const GameGraph& g);
};

// Argmax over candidate children of (r*c_j, c_j, v_j, +/-visits) for the mover
// j = player_of(s); residual ties broken toward the smallest child id.
StateId best_action_n_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId s,
                         const std::vector<StateId>& candidates, TiePreference pref);

// Argmax over all children of (r*c_j, c_j, visits, v_j).
StateId safest_action_n_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId s);

// 1 if c(s)_j = 1, v(s)_j = tmax_j, and some resolved child matches (c, v)(s)
// exactly (children scanned in increasing id order); otherwise min over
// children of r.
bool backup_resolution_n_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId s,
                            const std::vector<FixedPoint>& tmax);

IterationTrace umaxn_iteration_v2(const GameGraph& g, SearchTreeNP2& tree, StateId s,
                                  const EvalFn& eval, const TerminalEval& ft,
                                  const std::vector<FixedPoint>& tmax, std::int64_t iter = 1);

IterationTrace descent_n_iteration_v2(const GameGraph& g, SearchTreeNP2& tree, StateId s,
                                      const EvalFn& eval, const TerminalEval& ft,
                                      const std::vector<FixedPoint>& tmax, std::int64_t iter = 1);

// Final move choice from an expanded root; throws std::invalid_argument if the
// root is terminal or was never expanded.
StateId decide_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId root, NPPolicy policy);

SolveNPResult solve_np_v2(const GameGraph& g, StateId root, AlgoNP algo, std::int64_t budget,
                          const EvalFn& eval, const TerminalEval& ft,
                          NPPolicy policy = NPPolicy::kBest, const SolveNPOptions& opts = {});

}  // namespace gametree
