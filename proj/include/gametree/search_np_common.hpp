#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "gametree/eval.hpp"
#include "gametree/game.hpp"
#include "gametree/search_core.hpp"
#include "gametree/trace.hpp"

namespace gametree {

enum class AlgoNP { kUmaxn, kDescent };

/// Post-search move choice: best prefers completion, value, then visits;
/// safest prefers completion, then visits, then value.
enum class NPPolicy { kBest, kSafest };

/// Exploration hook used by the descent decision on an unresolved root.
/// The default is the deterministic decision selector so runs reproduce;
/// softmax picks a child with probability proportional to exp(v_j) using a
/// seeded RNG and exists for experimentation only.
struct ExplorationHook {
    enum class Kind { kDeterministic, kSoftmax };
    Kind kind = Kind::kDeterministic;
    std::uint64_t seed = 0;
};

/// Raised when the terminal evaluation fails the tie-breaking requirement
/// that multiplayer exactness depends on.
class TieBreakingError : public std::invalid_argument {
public:
    TieBreakingError(const TieBreakReport& rep)
        : std::invalid_argument(rep.reason), report(rep) {}

    TieBreakReport report;
};

struct SolveNPOptions {
    bool collect_traces = false;
    double max_seconds = 0.0;
    ExplorationHook exploration;
};

struct SolveNPResult {
    bool resolved = false;
    bool timed_out = false;
    std::vector<std::int8_t> c_root;
    std::vector<FixedPoint> v_root;
    std::int64_t iterations = 0;
    std::size_t nodes = 0;
    std::optional<StateId> chosen_action;
    std::vector<IterationTrace> traces;
};

}  // namespace gametree
