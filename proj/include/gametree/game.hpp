#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gametree/fixed_point.hpp"

namespace gametree {

using StateId = std::uint32_t;

/// One node of a finite acyclic game. A state with no children is terminal;
/// only terminals carry a gain vector (one component per player, each in
/// {-1, 0, +1}) and optionally an exact terminal-evaluation vector.
struct StateRecord {
    std::vector<StateId> children;
    int player = 1;  // player to move, 1..n; canonically 1 for terminals
    std::vector<std::int8_t> gain;
    std::optional<std::vector<FixedPoint>> teval;

    bool is_terminal() const { return children.empty(); }
    friend bool operator==(const StateRecord&, const StateRecord&) = default;
};

struct GameGraph {
    int num_players = 2;
    std::vector<StateRecord> states;

    StateId num_states() const { return static_cast<StateId>(states.size()); }
    bool is_terminal(StateId s) const { return states[s].is_terminal(); }
    int player_of(StateId s) const { return states[s].player; }
    const std::vector<StateId>& children(StateId s) const { return states[s].children; }

    std::vector<StateId> terminal_ids() const;
    bool has_teval() const;

    friend bool operator==(const GameGraph&, const GameGraph&) = default;
};

struct Violation {
    std::string message;
    std::optional<StateId> state;
};

/// Result of structural validation. topo_order is a deterministic
/// topological order (smallest-id-first Kahn) and is complete iff the
/// graph is acyclic.
struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<StateId> topo_order;

    bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant of a game: player count, dangling or
/// duplicate edges, acyclicity, gains present exactly on terminals with
/// components in {-1,0,+1} and one per player, zero-sum gains for
/// two-player games, and terminal evals (when present) on all terminals.
ValidationReport validate_game(const GameGraph& g);

}  // namespace gametree
