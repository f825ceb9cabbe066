#include "gametree/search2p.hpp"

#include <chrono>
#include <stdexcept>

namespace gametree {

SearchTree2P::SearchTree2P(const GameGraph& g)
    : v(g.num_states()),
      c(g.num_states(), 0),
      r(g.num_states(), 0),
      init(g.num_states(), 0),
      member(g.num_states(), 0),
      visits(g.num_states()) {
    for (StateId s = 0; s < g.num_states(); ++s) visits[s].resize(g.children(s).size(), 0);
}

namespace {

/// Signed lexicographic key so both players can use a single argmax:
/// player 1 compares (c, v, tau*n) directly, player 2 negates c and v.
struct Key2P {
    std::int64_t k0, k1, k2;
    friend auto operator<=>(const Key2P&, const Key2P&) = default;
};

class Engine2P {
public:
    Engine2P(const GameGraph& g, SearchTree2P& t, const EvalFn& eval, const TerminalEval& ft)
        : g_(g), t_(t), eval_(eval), ft_(ft) {}

    bool is_terminal(StateId s) const { return g_.is_terminal(s); }
    bool is_member(StateId s) const { return t_.member[s] != 0; }
    bool resolved(StateId s) const { return t_.r[s] != 0; }
    StateId child_at(StateId s, std::size_t idx) const { return g_.children(s)[idx]; }
    void bump(StateId s, std::size_t idx) { ++t_.visits[s][idx]; }

    void set_terminal(StateId s, IterationTrace& tr) {
        if (!t_.member[s]) {
            t_.member[s] = 1;
            ++t_.member_count;
            tr.added.push_back(s);
        }
        t_.init[s] = 1;
        t_.r[s] = 1;
        t_.c[s] = g_.states[s].gain[0];
        t_.v[s] = ft_.at(s)[0];
    }

    void init_frontier(StateId s) {
        if (t_.init[s]) return;
        t_.init[s] = 1;
        t_.r[s] = 0;
        t_.c[s] = 0;
        t_.v[s] = eval_.value(s, 1);
    }

    void expand(StateId s, IterationTrace& tr) {
        init_frontier(s);  // first touch of a fresh root
        if (!t_.member[s]) {
            t_.member[s] = 1;
            ++t_.member_count;
            tr.added.push_back(s);
        }
        for (StateId ch : g_.children(s)) {
            if (g_.is_terminal(ch))
                set_terminal(ch, tr);
            else
                init_frontier(ch);
        }
        backup(s, &tr);
    }

    std::vector<std::size_t> unresolved_children(StateId s) const {
        std::vector<std::size_t> out;
        const auto& ch = g_.children(s);
        for (std::size_t i = 0; i < ch.size(); ++i)
            if (!t_.r[ch[i]]) out.push_back(i);
        return out;
    }

    Key2P key(StateId s, std::size_t idx, TiePreference pref) const {
        StateId ch = g_.children(s)[idx];
        std::int64_t sigma = g_.player_of(s) == 1 ? 1 : -1;
        std::int64_t tau = pref == TiePreference::kPreferExplored ? 1 : -1;
        return {sigma * t_.c[ch], sigma * t_.v[ch].raw(),
                tau * static_cast<std::int64_t>(t_.visits[s][idx])};
    }

    std::size_t select(StateId s, const std::vector<std::size_t>& cand, TiePreference pref) const {
        std::size_t best = cand.front();
        Key2P best_key = key(s, best, pref);
        for (std::size_t i = 1; i < cand.size(); ++i) {
            Key2P k = key(s, cand[i], pref);
            StateId ch = g_.children(s)[cand[i]];
            if (k > best_key || (k == best_key && ch < g_.children(s)[best])) {
                best = cand[i];
                best_key = k;
            }
        }
        return best;
    }

    std::size_t select_dual(StateId s, const std::vector<std::size_t>& cand) const {
        return select(s, cand, TiePreference::kPreferUnexplored);
    }

    void backup(StateId s, IterationTrace* tr) {
        const auto& ch = g_.children(s);
        std::vector<std::size_t> all(ch.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::size_t bi = select(s, all, TiePreference::kPreferExplored);
        StateId best = ch[bi];
        t_.c[s] = t_.c[best];
        t_.v[s] = t_.v[best];
        bool was = t_.r[s] != 0;
        bool now;
        if (t_.c[s] != 0) {
            now = true;
        } else {
            now = true;
            for (StateId cs : ch)
                if (!t_.r[cs]) {
                    now = false;
                    break;
                }
        }
        t_.r[s] = now ? 1 : 0;
        if (!was && now && tr) tr->flips.push_back(s);
    }

private:
    const GameGraph& g_;
    SearchTree2P& t_;
    const EvalFn& eval_;
    const TerminalEval& ft_;
};

}  // namespace

StateId completed_best_action(const GameGraph& g, const SearchTree2P& tree, StateId s,
                              const std::vector<StateId>& candidates, TiePreference pref) {
    if (candidates.empty()) throw std::invalid_argument("completed_best_action: no candidates");
    // Work on child indices so visit counts line up.
    const auto& ch = g.children(s);
    std::vector<std::size_t> idx;
    for (StateId want : candidates) {
        bool found = false;
        for (std::size_t i = 0; i < ch.size(); ++i) {
            if (ch[i] == want) {
                if (!tree.init[want])
                    throw std::invalid_argument("completed_best_action: candidate not initialized");
                idx.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("completed_best_action: candidate is not a child");
    }
    // Reuse the engine's comparator through a const-cast-free local copy of
    // the selection logic: keys depend only on tree contents.
    std::int64_t sigma = g.player_of(s) == 1 ? 1 : -1;
    std::int64_t tau = pref == TiePreference::kPreferExplored ? 1 : -1;
    auto key = [&](std::size_t i) {
        StateId child = ch[i];
        return Key2P{sigma * tree.c[child], sigma * tree.v[child].raw(),
                     tau * static_cast<std::int64_t>(tree.visits[s][i])};
    };
    std::size_t best = idx.front();
    Key2P best_key = key(best);
    for (std::size_t i = 1; i < idx.size(); ++i) {
        Key2P k = key(idx[i]);
        if (k > best_key || (k == best_key && ch[idx[i]] < ch[best])) {
            best = idx[i];
            best_key = k;
        }
    }
    return ch[best];
}

bool backup_resolution(const GameGraph& g, const SearchTree2P& tree, StateId s) {
    if (tree.c[s] != 0) return true;
    for (StateId ch : g.children(s)) {
        if (!tree.init[ch]) throw std::logic_error("backup_resolution: child not initialized");
        if (!tree.r[ch]) return false;
    }
    return true;
}

IterationTrace ubfm_iteration(const GameGraph& g, SearchTree2P& tree, StateId s,
                              const EvalFn& eval, const TerminalEval& ft, std::int64_t iter) {
    Engine2P e(g, tree, eval, ft);
    return detail::best_first_iteration(e, s, iter);
}

IterationTrace descent_iteration(const GameGraph& g, SearchTree2P& tree, StateId s,
                                 const EvalFn& eval, const TerminalEval& ft, std::int64_t iter) {
    Engine2P e(g, tree, eval, ft);
    return detail::descent_iteration_shape(e, s, iter);
}

Solve2PResult solve2p(const GameGraph& g, StateId root, Algo2P algo, std::int64_t budget,
                      const EvalFn& eval, const TerminalEval& ft, const Solve2POptions& opts) {
    if (g.num_players != 2) throw std::invalid_argument("solve2p: game must have 2 players");
    if (root >= g.num_states()) throw std::invalid_argument("solve2p: root out of range");
    if (budget < 1) throw std::invalid_argument("solve2p: budget must be at least 1");

    SearchTree2P tree(g);
    Solve2PResult out;
    auto start = std::chrono::steady_clock::now();
    for (std::int64_t i = 1; i <= budget; ++i) {
        if (tree.r[root]) break;
        if (opts.max_seconds > 0 && i > 1) {
            std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            if (elapsed.count() > opts.max_seconds) {
                out.timed_out = true;
                break;
            }
        }
        IterationTrace t = algo == Algo2P::kUbfm ? ubfm_iteration(g, tree, root, eval, ft, i)
                                                 : descent_iteration(g, tree, root, eval, ft, i);
        ++out.iterations;
        if (opts.collect_traces) out.traces.push_back(std::move(t));
    }
    out.resolved = tree.r[root] != 0;
    out.c_root = tree.c[root];
    out.v_root = tree.v[root];
    out.nodes = tree.member_count;
    if (!g.is_terminal(root) && tree.member[root]) {
        out.best_child = completed_best_action(g, tree, root, g.children(root),
                                               TiePreference::kPreferExplored);
    }
    return out;
}

}  // namespace gametree
