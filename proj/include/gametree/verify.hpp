#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gametree/eval.hpp"
#include "gametree/game.hpp"
#include "gametree/search2p.hpp"
#include "gametree/search_np_common.hpp"

// Audited solver runs: drive a search iteration by iteration and check, after
// every iteration, the structural invariants the algorithms are supposed to
// maintain (frozen resolved values, resolution/completion coupling, progress,
// the 2|S| resolution bound, and exact agreement with the brute-force values
// on every resolved state).

namespace gametree {

struct AuditViolation {
    std::string invariant;  // "frozen", "coupling", "progress", "bound", "exactness", ...
    std::int64_t iter = 0;
    std::optional<StateId> state;
    std::string message;
};

struct AuditOptions {
    // Some audits (all-children-resolved forces resolution, the v2 witness
    // converse, v2 best-child consistency) can be transiently violated on
    // shared states of a DAG when another parent resolves a child of a state
    // that is not re-backed-up until revisited. They hold on trees; disable
    // them when auditing games with transpositions.
    bool tree_audits = true;
    // Compare every resolved state against the brute-force oracle. For the
    // multiplayer runs this requires (and enforces) a tie-breaking terminal
    // evaluation.
    bool check_exactness = true;
    std::size_t max_violations = 32;
};

struct AuditReport {
    std::vector<AuditViolation> violations;  // first max_violations, in order
    std::uint64_t violation_count = 0;       // total observed
    std::int64_t iterations = 0;
    bool resolved = false;

    bool ok() const { return violation_count == 0; }
};

// budget <= 0 means the default bound of 2 * num_states iterations.
AuditReport audited_run_2p(const GameGraph& g, StateId root, Algo2P algo, std::int64_t budget,
                           const EvalFn& eval, const TerminalEval& ft,
                           const AuditOptions& opts = {});

AuditReport audited_run_np_v1(const GameGraph& g, StateId root, AlgoNP algo, std::int64_t budget,
                              const EvalFn& eval, const TerminalEval& ft,
                              const AuditOptions& opts = {});

AuditReport audited_run_np_v2(const GameGraph& g, StateId root, AlgoNP algo, std::int64_t budget,
                              const EvalFn& eval, const TerminalEval& ft,
                              const AuditOptions& opts = {});

}  // namespace gametree
