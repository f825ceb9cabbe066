#include "gametree/game_gen.hpp"

#include <algorithm>
#include <stdexcept>

namespace gametree {

GameGraph generate_random_game(std::uint64_t seed, const GenParams& p) {
    if (p.num_players < 2) throw std::invalid_argument("generate: need at least 2 players");
    if (p.num_states < 1) throw std::invalid_argument("generate: need at least 1 state");
    if (p.max_children < 1) throw std::invalid_argument("generate: need max_children >= 1");
    if (p.dag_density < 0.0 || p.dag_density > 1.0)
        throw std::invalid_argument("generate: dag_density must be in [0,1]");
    if (p.draw_rate < 0.0 || p.draw_rate > 1.0)
        throw std::invalid_argument("generate: draw_rate must be in [0,1]");

    Rng rng(mix64(seed) ^ 0xa2b7c3d4e5f60718ULL);
    GameGraph g;
    g.num_players = p.num_players;
    g.states.resize(p.num_states);

    const auto cap = static_cast<std::size_t>(p.max_children);

    // Pass 1: random spanning tree, each state hangs off a lower-id parent
    // with spare out-degree. Guarantees reachability from 0 and a DAG.
    std::vector<StateId> spare;
    for (StateId s = 1; s < p.num_states; ++s) {
        spare.clear();
        for (StateId q = 0; q < s; ++q)
            if (g.states[q].children.size() < cap) spare.push_back(q);
        StateId parent = spare[rng.below(spare.size())];
        g.states[parent].children.push_back(s);
    }

    // Pass 2: extra edges to random higher-id states, creating shared
    // descendants. Only states that already have children gain edges, so
    // the terminal set is unchanged.
    auto attempts = static_cast<std::uint64_t>(p.dag_density * static_cast<double>(p.num_states));
    for (std::uint64_t a = 0; a < attempts; ++a) {
        std::vector<StateId> sources;
        for (StateId s = 0; s + 1 < p.num_states; ++s)
            if (!g.states[s].children.empty() && g.states[s].children.size() < cap)
                sources.push_back(s);
        if (sources.empty()) break;
        StateId s = sources[rng.below(sources.size())];
        StateId c = s + 1 + static_cast<StateId>(rng.below(p.num_states - s - 1));
        auto& ch = g.states[s].children;
        if (std::find(ch.begin(), ch.end(), c) == ch.end()) ch.push_back(c);
    }

    // Players and gains.
    for (StateId s = 0; s < p.num_states; ++s) {
        StateRecord& st = g.states[s];
        if (!st.is_terminal()) {
            st.player = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p.num_players)));
            continue;
        }
        st.player = 1;
        st.gain.resize(p.num_players);
        if (p.num_players == 2) {
            std::int8_t v = rng.unit() < p.draw_rate ? std::int8_t{0}
                            : (rng.below(2) ? std::int8_t{1} : std::int8_t{-1});
            st.gain[0] = v;
            st.gain[1] = static_cast<std::int8_t>(-v);
        } else {
            for (int j = 0; j < p.num_players; ++j)
                st.gain[j] = rng.unit() < p.draw_rate ? std::int8_t{0}
                             : (rng.below(2) ? std::int8_t{1} : std::int8_t{-1});
        }
    }
    return g;
}

}  // namespace gametree
