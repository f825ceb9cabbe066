#pragma once

#include "gametree/search_np_common.hpp"

namespace gametree {

/// Multiplayer tree for the gated-completion variant: the completion
/// vector c(s) stays (0,...,0) until the state resolves; backups stage the
/// best child's completion in c_prime and copy it into c only on
/// resolution. All value vectors have one component per player.
struct SearchTreeNP1 {
    SearchTreeNP1(const GameGraph& g);

    int num_players;
    std::vector<std::vector<FixedPoint>> v;
    std::vector<std::vector<std::int8_t>> c;
    std::vector<std::vector<std::int8_t>> c_prime;
    std::vector<std::uint8_t> r;
    std::vector<std::uint8_t> init;
    std::vector<std::uint8_t> member;
    std::vector<std::vector<std::uint32_t>> visits;
    std::size_t member_count = 0;
};

/// argmax over candidates of (c(s')_j, v(s')_j, +-n(s,s')) for the mover j
/// of s; every player maximizes their own component. Residual ties go to
/// the smallest child id.
StateId best_action_n_v1(const GameGraph& g, const SearchTreeNP1& tree, StateId s,
                         const std::vector<StateId>& candidates, TiePreference pref);

/// argmax of (c_j, n, v_j): prefers confirmed completion, then the most
/// visited child, then value.
StateId safest_action_n_v1(const GameGraph& g, const SearchTreeNP1& tree, StateId s);

/// 1 when the staged completion shows a win for the mover at the global
/// terminal-eval maximum, else the minimum of the children's resolutions.
bool backup_resolution_n_v1(const GameGraph& g, const SearchTreeNP1& tree, StateId s,
                            const std::vector<FixedPoint>& tmax);

IterationTrace umaxn_iteration_v1(const GameGraph& g, SearchTreeNP1& tree, StateId s,
                                  const EvalFn& eval, const TerminalEval& ft,
                                  const std::vector<FixedPoint>& tmax, std::int64_t iter = 1);

IterationTrace descent_n_iteration_v1(const GameGraph& g, SearchTreeNP1& tree, StateId s,
                                      const EvalFn& eval, const TerminalEval& ft,
                                      const std::vector<FixedPoint>& tmax, std::int64_t iter = 1);

/// Post-search move choice over all children of an expanded root.
/// Throws std::invalid_argument if the root was never expanded.
StateId decide_v1(const GameGraph& g, const SearchTreeNP1& tree, StateId root, NPPolicy policy);

/// Iterates from root until resolution or budget exhaustion. The terminal
/// eval must be tie-breaking (TieBreakingError otherwise). The chosen
/// action follows `policy` for umaxn; descent uses the exploration
/// decision rule: on a resolved root the argmax of (c_j, v_j), otherwise
/// the pluggable exploration hook.
SolveNPResult solve_np_v1(const GameGraph& g, StateId root, AlgoNP algo, std::int64_t budget,
                          const EvalFn& eval, const TerminalEval& ft,
                          NPPolicy policy = NPPolicy::kBest, const SolveNPOptions& opts = {});

}  // namespace gametree
