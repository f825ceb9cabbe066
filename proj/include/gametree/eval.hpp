#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gametree/game.hpp"

namespace gametree {

/// Heuristic evaluation of non-terminal states (per player component).
/// zero: always 0. hashed(seed): deterministic pseudo-random value in
/// (-1, +1) on the fixed-point grid, derived from (seed, state, component)
/// by splitmix64 mixing. table: explicit per-state vectors.
class EvalFn {
public:
    static EvalFn zero();
    static EvalFn hashed(std::uint64_t seed);
    static EvalFn table(std::map<StateId, std::vector<FixedPoint>> values);

    /// Component for player j (1-based) of an n-player game.
    FixedPoint value(StateId s, int player_j) const;

private:
    enum class Kind { kZero, kHashed, kTable };
    Kind kind_ = Kind::kZero;
    std::uint64_t seed_ = 0;
    std::map<StateId, std::vector<FixedPoint>> table_;
};

/// Exact terminal evaluation f_t: one n-vector per terminal state.
struct TerminalEval {
    std::vector<std::optional<std::vector<FixedPoint>>> values;  // indexed by StateId

    const std::vector<FixedPoint>& at(StateId s) const { return *values[s]; }
    bool covers(const GameGraph& g) const;
};

/// f_t = f_b: terminal eval equals the gain vector.
TerminalEval terminal_eval_from_gains(const GameGraph& g);

/// Terminal eval embedded in the game file. Requires complete coverage.
TerminalEval terminal_eval_from_game(const GameGraph& g);

/// f_t(s)_j = f_b(s)_j + epsilon * rank(s), with rank the index of s among
/// terminals in deterministic topological-then-id order. Each terminal gets
/// a distinct sub-unit perturbation, so the result is tie-breaking.
/// Preconditions: epsilon > 0 and epsilon * #terminals < 1; violations
/// throw std::invalid_argument.
TerminalEval make_tie_breaking_eval(const GameGraph& g, FixedPoint epsilon);

struct TieBreakReport {
    bool ok = true;
    // First offending pair of terminals, in id order, when !ok.
    StateId first = 0;
    StateId second = 0;
    std::string reason;
};

/// A terminal eval is tie-breaking when for every pair of terminals either
/// every player whose gains agree gets distinct evals, or both gains and
/// evals are fully identical. Throws std::invalid_argument if f_t does not
/// cover every terminal.
TieBreakReport check_tie_breaking(const GameGraph& g, const TerminalEval& ft);

/// Per-player maxima of f_t over every terminal of the game; computed once
/// per (game, f_t) and reused by the multiplayer resolution rules.
/// Throws std::logic_error if the game has no terminal.
std::vector<FixedPoint> terminal_eval_max(const GameGraph& g, const TerminalEval& ft);

}  // namespace gametree
