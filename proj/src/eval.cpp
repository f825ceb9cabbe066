#include "gametree/eval.hpp"

#include <stdexcept>

#include "gametree/game_gen.hpp"

namespace gametree {

EvalFn EvalFn::zero() { return EvalFn{}; }

EvalFn EvalFn::hashed(std::uint64_t seed) {
    EvalFn f;
    f.kind_ = Kind::kHashed;
    f.seed_ = seed;
    return f;
}

EvalFn EvalFn::table(std::map<StateId, std::vector<FixedPoint>> values) {
    EvalFn f;
    f.kind_ = Kind::kTable;
    f.table_ = std::move(values);
    return f;
}

FixedPoint EvalFn::value(StateId s, int player_j) const {
    switch (kind_) {
        case Kind::kZero:
            return FixedPoint{};
        case Kind::kHashed: {
            std::uint64_t h = mix64(mix64(seed_) ^ mix64(static_cast<std::uint64_t>(s) + 1) ^
                                    (0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(player_j)));
            // Raw value in [-(10^6 - 1), 10^6 - 1]: strictly inside (-1, +1).
            auto span = static_cast<std::uint64_t>(2 * (FixedPoint::kScale - 1) + 1);
            auto raw = static_cast<std::int64_t>(h % span) - (FixedPoint::kScale - 1);
            return FixedPoint::from_raw(raw);
        }
        case Kind::kTable: {
            auto it = table_.find(s);
            if (it == table_.end()) throw std::out_of_range("eval table: no entry for state");
            const auto& vec = it->second;
            if (player_j < 1 || static_cast<std::size_t>(player_j) > vec.size())
                throw std::out_of_range("eval table: no component for player");
            return vec[static_cast<std::size_t>(player_j - 1)];
        }
    }
    return FixedPoint{};
}

bool TerminalEval::covers(const GameGraph& g) const {
    if (values.size() != g.num_states()) return false;
    for (StateId s = 0; s < g.num_states(); ++s)
        if (g.is_terminal(s) && !values[s]) return false;
    return true;
}

TerminalEval terminal_eval_from_gains(const GameGraph& g) {
    TerminalEval te;
    te.values.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
        const StateRecord& st = g.states[s];
        if (!st.is_terminal()) continue;
        std::vector<FixedPoint> v;
        v.reserve(st.gain.size());
        for (auto c : st.gain) v.push_back(FixedPoint::from_units(c));
        te.values[s] = std::move(v);
    }
    return te;
}

TerminalEval terminal_eval_from_game(const GameGraph& g) {
    TerminalEval te;
    te.values.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
        const StateRecord& st = g.states[s];
        if (!st.is_terminal()) continue;
        if (!st.teval) throw std::invalid_argument("game has no embedded terminal eval for state " +
                                                   std::to_string(s));
        te.values[s] = *st.teval;
    }
    return te;
}

TerminalEval make_tie_breaking_eval(const GameGraph& g, FixedPoint epsilon) {
    if (epsilon.raw() <= 0) throw std::invalid_argument("tie-break epsilon must be positive");
    auto rep = validate_game(g);
    auto terminals = g.terminal_ids();
    if (epsilon.raw() * static_cast<std::int64_t>(terminals.size()) >= FixedPoint::kScale)
        throw std::invalid_argument(
            "tie-break epsilon too large: epsilon * #terminals must stay below 1");

    // Rank terminals by their position in the deterministic topological
    // order (smallest-id Kahn), so ranks are stable for a given graph.
    std::vector<std::int64_t> rank(g.num_states(), -1);
    std::int64_t next = 0;
    for (StateId s : rep.topo_order)
        if (g.is_terminal(s)) rank[s] = next++;
    // Cyclic graphs may leave terminals unranked; fall back to id order.
    for (StateId s : terminals)
        if (rank[s] < 0) rank[s] = next++;

    TerminalEval te;
    te.values.resize(g.num_states());
    for (StateId s : terminals) {
        std::vector<FixedPoint> v;
        v.reserve(g.states[s].gain.size());
        for (auto c : g.states[s].gain)
            v.push_back(FixedPoint::from_units(c) + epsilon * rank[s]);
        te.values[s] = std::move(v);
    }
    return te;
}

TieBreakReport check_tie_breaking(const GameGraph& g, const TerminalEval& ft) {
    auto terminals = g.terminal_ids();
    for (StateId s : terminals)
        if (ft.values.size() <= s || !ft.values[s])
            throw std::invalid_argument("terminal eval missing entry for state " +
                                        std::to_string(s));

    const auto n = static_cast<std::size_t>(g.num_players);
    for (std::size_t a = 0; a < terminals.size(); ++a) {
        for (std::size_t b = a + 1; b < terminals.size(); ++b) {
            StateId s = terminals[a], t = terminals[b];
            const auto& gs = g.states[s].gain;
            const auto& gt = g.states[t].gain;
            const auto& es = ft.at(s);
            const auto& et = ft.at(t);
            bool per_player_ok = true;  // gains equal => evals distinct, for every player
            for (std::size_t j = 0; j < n; ++j)
                if (gs[j] == gt[j] && es[j] == et[j]) per_player_ok = false;
            if (per_player_ok) continue;
            if (gs == gt && es == et) continue;  // fully identical pair is allowed
            return {false, s, t,
                    "terminals " + std::to_string(s) + " and " + std::to_string(t) +
                        " tie on gain and eval for some player without being identical"};
        }
    }
    return {};
}

std::vector<FixedPoint> terminal_eval_max(const GameGraph& g, const TerminalEval& ft) {
    auto terminals = g.terminal_ids();
    if (terminals.empty()) throw std::logic_error("game has no terminal state");
    const auto n = static_cast<std::size_t>(g.num_players);
    std::vector<FixedPoint> best(n, FixedPoint::from_raw(INT64_MIN));
    for (StateId s : terminals) {
        const auto& v = ft.at(s);
        for (std::size_t j = 0; j < n; ++j)
            if (v[j] > best[j]) best[j] = v[j];
    }
    return best;
}

}  // namespace gametree
