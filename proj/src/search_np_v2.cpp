#include "gametree/search_np_v2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "gametree/game_gen.hpp"

namespace gametree {

SearchTreeNP2::SearchTreeNP2(const GameGraph& g)
    : num_players(g.num_players),
      v(g.num_states(), std::vector<FixedPoint>(g.num_players)),
      c(g.num_states(), std::vector<std::int8_t>(g.num_players, 0)),
      r(g.num_states(), 0),
      init(g.num_states(), 0),
      member(g.num_states(), 0),
      visits(g.num_states()) {
    for (StateId s = 0; s < g.num_states(); ++s) visits[s].resize(g.children(s).size(), 0);
}

namespace {

struct Key4 {
    std::int64_t k0, k1, k2, k3;
    friend auto operator<=>(const Key4&, const Key4&) = default;
};

class EngineNPV2 {
public:
    EngineNPV2(const GameGraph& g, SearchTreeNP2& t, const EvalFn& eval, const TerminalEval& ft,
               const std::vector<FixedPoint>& tmax)
        : g_(g), t_(t), eval_(eval), ft_(ft), tmax_(tmax) {}

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
        const auto& gain = g_.states[s].gain;
        t_.c[s].assign(gain.begin(), gain.end());
        t_.v[s] = ft_.at(s);
    }

    void init_frontier(StateId s) {
        if (t_.init[s]) return;
        t_.init[s] = 1;
        t_.r[s] = 0;
        std::fill(t_.c[s].begin(), t_.c[s].end(), std::int8_t{0});
        for (int j = 1; j <= t_.num_players; ++j)
            t_.v[s][static_cast<std::size_t>(j - 1)] = eval_.value(s, j);
    }

    void expand(StateId s, IterationTrace& tr) {
        init_frontier(s);
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

    Key4 key(StateId s, std::size_t idx, TiePreference pref) const {
        StateId ch = g_.children(s)[idx];
        auto j = static_cast<std::size_t>(g_.player_of(s) - 1);
        std::int64_t tau = pref == TiePreference::kPreferExplored ? 1 : -1;
        return {static_cast<std::int64_t>(t_.r[ch]) * t_.c[ch][j], t_.c[ch][j],
                t_.v[ch][j].raw(), tau * static_cast<std::int64_t>(t_.visits[s][idx])};
    }

    std::size_t select(StateId s, const std::vector<std::size_t>& cand, TiePreference pref) const {
        std::size_t best = cand.front();
        Key4 bk = key(s, best, pref);
        for (std::size_t i = 1; i < cand.size(); ++i) {
            Key4 k = key(s, cand[i], pref);
            if (k > bk || (k == bk && g_.children(s)[cand[i]] < g_.children(s)[best])) {
                best = cand[i];
                bk = k;
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
        StateId best = ch[select(s, all, TiePreference::kPreferExplored)];
        t_.c[s] = t_.c[best];
        t_.v[s] = t_.v[best];
        bool was = t_.r[s] != 0;
        bool now = backup_resolution_n_v2(g_, t_, s, tmax_);
        t_.r[s] = now ? 1 : 0;
        if (!was && now && tr) tr->flips.push_back(s);
    }

private:
    const GameGraph& g_;
    SearchTreeNP2& t_;
    const EvalFn& eval_;
    const TerminalEval& ft_;
    const std::vector<FixedPoint>& tmax_;
};

StateId select_by_ids(const GameGraph& g, StateId s, const std::vector<StateId>& candidates,
                      const std::vector<std::uint8_t>& init,
                      const std::function<Key4(std::size_t)>& key) {
    if (candidates.empty()) throw std::invalid_argument("best_action_n: no candidates");
    const auto& ch = g.children(s);
    std::vector<std::size_t> idx;
    for (StateId want : candidates) {
        bool found = false;
        for (std::size_t i = 0; i < ch.size(); ++i) {
            if (ch[i] == want) {
                if (!init[want])
                    throw std::invalid_argument("best_action_n: candidate not initialized");
                idx.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("best_action_n: candidate is not a child");
    }
    std::size_t best = idx.front();
    Key4 bk = key(best);
    for (std::size_t i = 1; i < idx.size(); ++i) {
        Key4 k = key(idx[i]);
        if (k > bk || (k == bk && ch[idx[i]] < ch[best])) {
            best = idx[i];
            bk = k;
        }
    }
    return ch[best];
}

}  // namespace

StateId best_action_n_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId s,
                         const std::vector<StateId>& candidates, TiePreference pref) {
    auto j = static_cast<std::size_t>(g.player_of(s) - 1);
    std::int64_t tau = pref == TiePreference::kPreferExplored ? 1 : -1;
    return select_by_ids(g, s, candidates, tree.init, [&](std::size_t i) {
        StateId ch = g.children(s)[i];
        return Key4{static_cast<std::int64_t>(tree.r[ch]) * tree.c[ch][j], tree.c[ch][j],
                    tree.v[ch][j].raw(), tau * static_cast<std::int64_t>(tree.visits[s][i])};
    });
}

StateId safest_action_n_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId s) {
    auto j = static_cast<std::size_t>(g.player_of(s) - 1);
    return select_by_ids(g, s, g.children(s), tree.init, [&](std::size_t i) {
        StateId ch = g.children(s)[i];
        return Key4{static_cast<std::int64_t>(tree.r[ch]) * tree.c[ch][j], tree.c[ch][j],
                    static_cast<std::int64_t>(tree.visits[s][i]), tree.v[ch][j].raw()};
    });
}

bool backup_resolution_n_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId s,
                            const std::vector<FixedPoint>& tmax) {
    auto j = static_cast<std::size_t>(g.player_of(s) - 1);
    for (StateId ch : g.children(s))
        if (!tree.init[ch]) throw std::logic_error("backup_resolution_n: child not initialized");
    if (tree.c[s][j] == 1 && tree.v[s][j] == tmax[j]) {
        std::vector<StateId> ordered = g.children(s);
        std::sort(ordered.begin(), ordered.end());
        for (StateId ch : ordered)
            if (tree.r[ch] && tree.c[ch] == tree.c[s] && tree.v[ch] == tree.v[s]) return true;
    }
    for (StateId ch : g.children(s))
        if (!tree.r[ch]) return false;
    return true;
}

IterationTrace umaxn_iteration_v2(const GameGraph& g, SearchTreeNP2& tree, StateId s,
                                  const EvalFn& eval, const TerminalEval& ft,
                                  const std::vector<FixedPoint>& tmax, std::int64_t iter) {
    EngineNPV2 e(g, tree, eval, ft, tmax);
    return detail::best_first_iteration(e, s, iter);
}

IterationTrace descent_n_iteration_v2(const GameGraph& g, SearchTreeNP2& tree, StateId s,
                                      const EvalFn& eval, const TerminalEval& ft,
                                      const std::vector<FixedPoint>& tmax, std::int64_t iter) {
    EngineNPV2 e(g, tree, eval, ft, tmax);
    return detail::descent_iteration_shape(e, s, iter);
}

StateId decide_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId root, NPPolicy policy) {
    if (g.is_terminal(root) || !tree.member[root])
        throw std::invalid_argument("decide: root not expanded");
    if (policy == NPPolicy::kBest)
        return best_action_n_v2(g, tree, root, g.children(root), TiePreference::kPreferExplored);
    return safest_action_n_v2(g, tree, root);
}

namespace {

StateId exploration_decision_v2(const GameGraph& g, const SearchTreeNP2& tree, StateId root,
                                const ExplorationHook& hook) {
    auto j = static_cast<std::size_t>(g.player_of(root) - 1);
    if (tree.r[root]) {
        // Resolved root: pick by resolved completion then value, visits untouched.
        return select_by_ids(g, root, g.children(root), tree.init, [&](std::size_t i) {
            StateId ch = g.children(root)[i];
            return Key4{static_cast<std::int64_t>(tree.r[ch]) * tree.c[ch][j], tree.c[ch][j],
                        tree.v[ch][j].raw(), 0};
        });
    }
    if (hook.kind == ExplorationHook::Kind::kSoftmax) {
        const auto& ch = g.children(root);
        std::vector<double> w(ch.size());
        double total = 0;
        for (std::size_t i = 0; i < ch.size(); ++i) {
            w[i] = std::exp(tree.v[ch[i]][j].to_double());
            total += w[i];
        }
        Rng rng(mix64(hook.seed) ^ 0x5bf03635d3a1e1c7ULL);
        double pick = rng.unit() * total;
        for (std::size_t i = 0; i < ch.size(); ++i) {
            pick -= w[i];
            if (pick <= 0) return ch[i];
        }
        return ch.back();
    }
    return best_action_n_v2(g, tree, root, g.children(root), TiePreference::kPreferExplored);
}

}  // namespace

SolveNPResult solve_np_v2(const GameGraph& g, StateId root, AlgoNP algo, std::int64_t budget,
                          const EvalFn& eval, const TerminalEval& ft, NPPolicy policy,
                          const SolveNPOptions& opts) {
    if (root >= g.num_states()) throw std::invalid_argument("solve: root out of range");
    if (budget < 1) throw std::invalid_argument("solve: budget must be at least 1");
    auto tie = check_tie_breaking(g, ft);
    if (!tie.ok) throw TieBreakingError(tie);
    auto tmax = terminal_eval_max(g, ft);

    SearchTreeNP2 tree(g);
    SolveNPResult out;
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
        IterationTrace t = algo == AlgoNP::kUmaxn
                               ? umaxn_iteration_v2(g, tree, root, eval, ft, tmax, i)
                               : descent_n_iteration_v2(g, tree, root, eval, ft, tmax, i);
        ++out.iterations;
        if (opts.collect_traces) out.traces.push_back(std::move(t));
    }
    out.resolved = tree.r[root] != 0;
    out.c_root = tree.c[root];
    out.v_root = tree.v[root];
    out.nodes = tree.member_count;
    if (!g.is_terminal(root) && tree.member[root]) {
        out.chosen_action = algo == AlgoNP::kDescent
                                ? exploration_decision_v2(g, tree, root, opts.exploration)
                                : decide_v2(g, tree, root, policy);
    }
    return out;
}

}  // namespace gametree
