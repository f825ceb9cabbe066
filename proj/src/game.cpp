#include "gametree/game.hpp"

#include <algorithm>
#include <queue>

namespace gametree {

std::vector<StateId> GameGraph::terminal_ids() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < num_states(); ++s)
        if (states[s].is_terminal()) out.push_back(s);
    return out;
}

bool GameGraph::has_teval() const {
    for (const auto& st : states)
        if (st.is_terminal() && st.teval) return true;
    return false;
}

namespace {

void check_state_local(const GameGraph& g, StateId s, ValidationReport& rep) {
    const StateRecord& st = g.states[s];
    const auto n = static_cast<std::size_t>(g.num_players);

    std::vector<StateId> sorted = st.children;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= g.num_states()) {
            rep.violations.push_back({"edge to unknown state " + std::to_string(sorted[i]), s});
        } else if (i > 0 && sorted[i] == sorted[i - 1]) {
            rep.violations.push_back({"duplicate edge to state " + std::to_string(sorted[i]), s});
        }
        if (sorted[i] == s) rep.violations.push_back({"self edge (cycle)", s});
    }

    if (st.is_terminal()) {
        if (st.gain.size() != n) {
            rep.violations.push_back(
                {"terminal gain vector must have one component per player", s});
        }
        for (auto c : st.gain) {
            if (c < -1 || c > 1) {
                rep.violations.push_back({"gain out of range (must be -1, 0 or 1)", s});
                break;
            }
        }
        if (g.num_players == 2 && st.gain.size() == 2 && st.gain[1] != -st.gain[0])
            rep.violations.push_back({"two-player terminal gains are not zero-sum", s});
        if (st.teval && st.teval->size() != n)
            rep.violations.push_back({"terminal eval vector must have one component per player", s});
    } else {
        if (st.player < 1 || st.player > g.num_players)
            rep.violations.push_back({"player out of range", s});
        if (!st.gain.empty())
            rep.violations.push_back({"gain on non-terminal state", s});
        if (st.teval)
            rep.violations.push_back({"terminal eval on non-terminal state", s});
    }
}

}  // namespace

ValidationReport validate_game(const GameGraph& g) {
    ValidationReport rep;
    if (g.num_players < 2)
        rep.violations.push_back({"players out of range (need at least 2)", std::nullopt});

    for (StateId s = 0; s < g.num_states(); ++s) check_state_local(g, s, rep);

    // teval must cover all terminals or none.
    if (g.has_teval()) {
        for (StateId s = 0; s < g.num_states(); ++s)
            if (g.states[s].is_terminal() && !g.states[s].teval)
                rep.violations.push_back({"terminal eval missing (must cover all terminals)", s});
    }

    // Kahn topological sort, smallest id first, over in-range edges only.
    std::vector<std::uint32_t> indeg(g.num_states(), 0);
    for (StateId s = 0; s < g.num_states(); ++s)
        for (StateId c : g.states[s].children)
            if (c < g.num_states() && c != s) ++indeg[c];
    std::priority_queue<StateId, std::vector<StateId>, std::greater<>> ready;
    for (StateId s = 0; s < g.num_states(); ++s)
        if (indeg[s] == 0) ready.push(s);
    while (!ready.empty()) {
        StateId s = ready.top();
        ready.pop();
        rep.topo_order.push_back(s);
        for (StateId c : g.states[s].children)
            if (c < g.num_states() && c != s && --indeg[c] == 0) ready.push(c);
    }
    if (rep.topo_order.size() != g.num_states())
        rep.violations.push_back({"cycle detected", std::nullopt});

    return rep;
}

}  // namespace gametree
