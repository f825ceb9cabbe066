#include "gametree/oracle.hpp"

#include <stdexcept>

namespace gametree {

namespace {

std::vector<StateId> reverse_topo(const GameGraph& g) {
    auto rep = validate_game(g);
    if (rep.topo_order.size() != g.num_states())
        throw std::invalid_argument("oracle requires an acyclic game");
    return {rep.topo_order.rbegin(), rep.topo_order.rend()};
}

}  // namespace

std::vector<std::int8_t> minimax(const GameGraph& g) {
    if (g.num_players != 2) throw std::invalid_argument("minimax oracle requires a 2-player game");
    std::vector<std::int8_t> m(g.num_states(), 0);
    for (StateId s : reverse_topo(g)) {
        const StateRecord& st = g.states[s];
        if (st.is_terminal()) {
            m[s] = st.gain.at(0);
            continue;
        }
        bool maximize = st.player == 1;
        std::int8_t best = maximize ? std::int8_t{-2} : std::int8_t{2};
        for (StateId c : st.children) {
            if (maximize ? m[c] > best : m[c] < best) best = m[c];
        }
        m[s] = best;
    }
    return m;
}

MaxnResult maxn(const GameGraph& g, const TerminalEval& ft) {
    MaxnResult out;
    out.values.resize(g.num_states());
    for (StateId s : reverse_topo(g)) {
        const StateRecord& st = g.states[s];
        MaxnValue& val = out.values[s];
        if (st.is_terminal()) {
            val.gain = st.gain;
            val.eval = ft.at(s);
            continue;
        }
        const auto j = static_cast<std::size_t>(st.player - 1);
        // Find the maximal (gain_j, eval_j) key, then pick the smallest-id
        // child attaining it. If a second attainer carries a different
        // pair, the backed-up value depends on the tie-break rather than on
        // the game: record the ambiguity.
        auto key_less = [&](const MaxnValue& a, const MaxnValue& b) {
            if (a.gain[j] != b.gain[j]) return a.gain[j] < b.gain[j];
            return a.eval[j] < b.eval[j];
        };
        StateId top = st.children.front();
        for (StateId c : st.children)
            if (key_less(out.values[top], out.values[c])) top = c;
        StateId pick = top;
        for (StateId c : st.children) {
            const MaxnValue& cv = out.values[c];
            const MaxnValue& tv = out.values[top];
            if (cv.gain[j] != tv.gain[j] || cv.eval[j] != tv.eval[j]) continue;
            if (c < pick) pick = c;
            if (cv != tv) out.unique = false;
        }
        val = out.values[pick];
    }
    return out;
}

}  // namespace gametree
