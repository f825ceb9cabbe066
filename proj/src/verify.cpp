#include "gametree/verify.hpp"

#include <stdexcept>

#include "gametree/oracle.hpp"
#include "gametree/search_np_v1.hpp"
#include "gametree/search_np_v2.hpp"

namespace gametree {

namespace {

struct Ctx {
    const AuditOptions* opts;
    AuditReport* rep;

    void add(const char* inv, std::int64_t iter, std::optional<StateId> s, std::string msg) {
        ++rep->violation_count;
        if (rep->violations.size() < opts->max_violations)
            rep->violations.push_back({inv, iter, std::move(s), std::move(msg)});
    }
};

// Shared audit loop. Fam supplies the tree accessors, the iteration step and
// the family-specific per-state audits.
template <class Fam>
AuditReport run_audit(const GameGraph& g, StateId root, std::int64_t budget, Fam& fam,
                      const AuditOptions& opts) {
    if (root >= g.num_states()) throw std::invalid_argument("verify: root out of range");
    const auto n = g.num_states();
    if (budget <= 0) budget = 2 * static_cast<std::int64_t>(n);

    AuditReport rep;
    Ctx ctx{&opts, &rep};
    std::vector<std::uint8_t> was_member(n, 0), prev_r(n, 0), mark(n, 0);

    for (std::int64_t iter = 1; iter <= budget; ++iter) {
        if (fam.resolved(root)) break;
        IterationTrace tr = fam.step(iter);
        ++rep.iterations;

        if (tr.added.empty() && tr.flips.empty())
            ctx.add("progress", iter, std::nullopt, "iteration made no progress");
        for (StateId s : tr.added) {
            if (s >= n) {
                ctx.add("trace", iter, s, "added id out of range");
                continue;
            }
            if (was_member[s]) ctx.add("trace", iter, s, "added state was already a member");
            if (!fam.member(s)) ctx.add("trace", iter, s, "added state is not a member");
            mark[s] = 1;
        }
        for (StateId s : tr.flips) {
            if (s >= n) {
                ctx.add("trace", iter, s, "flipped id out of range");
                continue;
            }
            if (prev_r[s]) ctx.add("trace", iter, s, "flipped state was already resolved");
            if (!fam.resolved(s)) ctx.add("trace", iter, s, "flipped state is not resolved");
            mark[s] = 1;
        }

        for (StateId s = 0; s < n; ++s) {
            if (!fam.member(s)) {
                if (fam.resolved(s)) ctx.add("consistency", iter, s, "non-member is resolved");
                fam.audit_nonmember(ctx, s, iter);
                continue;
            }
            if (fam.resolved(s) && !prev_r[s] && !mark[s])
                ctx.add("trace", iter, s, "resolution flip missing from trace");
            if (fam.frozen_recorded(s)) {
                if (!fam.resolved(s))
                    ctx.add("frozen", iter, s, "resolution reverted to 0");
                else if (!fam.frozen_matches(s))
                    ctx.add("frozen", iter, s, "resolved values changed");
            } else if (fam.resolved(s)) {
                fam.record_frozen(s);
            }
            fam.audit_state(ctx, s, iter);
        }

        for (StateId s : tr.added)
            if (s < n) mark[s] = 0;
        for (StateId s : tr.flips)
            if (s < n) mark[s] = 0;
        for (StateId s = 0; s < n; ++s) {
            was_member[s] = fam.member(s) ? 1 : 0;
            prev_r[s] = fam.resolved(s) ? 1 : 0;
        }
    }

    rep.resolved = fam.resolved(root);
    if (!rep.resolved && rep.iterations >= 2 * static_cast<std::int64_t>(n))
        ctx.add("bound", rep.iterations, root, "root not resolved within twice the state count");
    return rep;
}

struct Fam2P {
    const GameGraph& g;
    StateId root;
    Algo2P algo;
    const EvalFn& eval;
    const TerminalEval& ft;
    const AuditOptions& opts;
    SearchTree2P tree;
    std::vector<std::int8_t> frozen_c;
    std::vector<std::uint8_t> frozen_set;
    std::vector<std::int8_t> oracle;

    Fam2P(const GameGraph& g_, StateId root_, Algo2P algo_, const EvalFn& e, const TerminalEval& f,
          const AuditOptions& o)
        : g(g_),
          root(root_),
          algo(algo_),
          eval(e),
          ft(f),
          opts(o),
          tree(g_),
          frozen_c(g_.num_states(), 0),
          frozen_set(g_.num_states(), 0) {
        if (opts.check_exactness) oracle = minimax(g);
    }

    bool member(StateId s) const { return tree.member[s] != 0; }
    bool resolved(StateId s) const { return tree.r[s] != 0; }
    IterationTrace step(std::int64_t iter) {
        return algo == Algo2P::kUbfm ? ubfm_iteration(g, tree, root, eval, ft, iter)
                                     : descent_iteration(g, tree, root, eval, ft, iter);
    }
    bool frozen_recorded(StateId s) const { return frozen_set[s] != 0; }
    void record_frozen(StateId s) {
        frozen_set[s] = 1;
        frozen_c[s] = tree.c[s];
    }
    bool frozen_matches(StateId s) const { return tree.c[s] == frozen_c[s]; }
    void audit_nonmember(Ctx&, StateId, std::int64_t) {}

    void audit_state(Ctx& ctx, StateId s, std::int64_t iter) {
        bool all_res = true;
        bool kids_ok = true;
        for (StateId ch : g.children(s)) {
            if (!tree.init[ch]) {
                ctx.add("consistency", iter, s, "member has uninitialized child");
                kids_ok = false;
            } else if (!tree.r[ch]) {
                all_res = false;
            }
        }
        bool r = tree.r[s] != 0;
        bool win = tree.c[s] != 0;
        if (r && !(win || all_res))
            ctx.add("coupling", iter, s, "resolved without completion or resolved children");
        if (win && !r) ctx.add("coupling", iter, s, "nonzero completion on unresolved state");
        if (opts.tree_audits && kids_ok && all_res && !r)
            ctx.add("coupling", iter, s, "all children resolved but state unresolved");
        if (!oracle.empty() && r && tree.c[s] != oracle[s])
            ctx.add("exactness", iter, s,
                    "resolved completion " + std::to_string(tree.c[s]) + " differs from oracle " +
                        std::to_string(oracle[s]));
    }
};

// Frozen snapshots and oracle comparison shared by both multiplayer variants.
struct FrozenNP {
    std::vector<std::vector<std::int8_t>> c;
    std::vector<std::vector<FixedPoint>> v;
    std::vector<std::uint8_t> set;

    explicit FrozenNP(StateId n) : c(n), v(n), set(n, 0) {}
};

struct FamNPV1 {
    const GameGraph& g;
    StateId root;
    AlgoNP algo;
    const EvalFn& eval;
    const TerminalEval& ft;
    const AuditOptions& opts;
    std::vector<FixedPoint> tmax;
    SearchTreeNP1 tree;
    FrozenNP fz;
    std::vector<std::vector<std::int8_t>> frozen_cp;
    const MaxnResult* oracle = nullptr;

    FamNPV1(const GameGraph& g_, StateId root_, AlgoNP algo_, const EvalFn& e,
            const TerminalEval& f, const AuditOptions& o, std::vector<FixedPoint> tmax_,
            const MaxnResult* oracle_)
        : g(g_),
          root(root_),
          algo(algo_),
          eval(e),
          ft(f),
          opts(o),
          tmax(std::move(tmax_)),
          tree(g_),
          fz(g_.num_states()),
          frozen_cp(g_.num_states()),
          oracle(oracle_) {}

    bool member(StateId s) const { return tree.member[s] != 0; }
    bool resolved(StateId s) const { return tree.r[s] != 0; }
    IterationTrace step(std::int64_t iter) {
        return algo == AlgoNP::kUmaxn
                   ? umaxn_iteration_v1(g, tree, root, eval, ft, tmax, iter)
                   : descent_n_iteration_v1(g, tree, root, eval, ft, tmax, iter);
    }
    bool frozen_recorded(StateId s) const { return fz.set[s] != 0; }
    void record_frozen(StateId s) {
        fz.set[s] = 1;
        fz.c[s] = tree.c[s];
        fz.v[s] = tree.v[s];
        frozen_cp[s] = tree.c_prime[s];
    }
    bool frozen_matches(StateId s) const {
        return tree.c[s] == fz.c[s] && tree.v[s] == fz.v[s] && tree.c_prime[s] == frozen_cp[s];
    }

    static bool zero(const std::vector<std::int8_t>& c) {
        for (auto x : c)
            if (x != 0) return false;
        return true;
    }

    void audit_nonmember(Ctx& ctx, StateId s, std::int64_t iter) {
        if (tree.init[s] && !zero(tree.c[s]))
            ctx.add("zero-completion", iter, s, "unresolved frontier state has nonzero completion");
    }

    void audit_state(Ctx& ctx, StateId s, std::int64_t iter) {
        bool all_res = true;
        bool kids_ok = true;
        for (StateId ch : g.children(s)) {
            if (!tree.init[ch]) {
                ctx.add("consistency", iter, s, "member has uninitialized child");
                kids_ok = false;
            } else if (!tree.r[ch]) {
                all_res = false;
            }
        }
        bool r = tree.r[s] != 0;
        auto j = static_cast<std::size_t>(g.player_of(s) - 1);
        bool win = tree.c_prime[s][j] == 1 && tree.v[s][j] == tmax[j];
        if (r && !(win || all_res))
            ctx.add("coupling", iter, s, "resolved without winning backup or resolved children");
        if (win && !r) ctx.add("coupling", iter, s, "winning backup on unresolved state");
        if (opts.tree_audits && kids_ok && all_res && !r)
            ctx.add("coupling", iter, s, "all children resolved but state unresolved");
        if (!r && !zero(tree.c[s]))
            ctx.add("zero-completion", iter, s, "unresolved state has nonzero completion");
        if (oracle && r &&
            (tree.c[s] != oracle->values[s].gain || tree.v[s] != oracle->values[s].eval))
            ctx.add("exactness", iter, s, "resolved (c, v) differs from oracle pair");
    }
};

struct FamNPV2 {
    const GameGraph& g;
    StateId root;
    AlgoNP algo;
    const EvalFn& eval;
    const TerminalEval& ft;
    const AuditOptions& opts;
    std::vector<FixedPoint> tmax;
    SearchTreeNP2 tree;
    FrozenNP fz;
    const MaxnResult* oracle = nullptr;

    FamNPV2(const GameGraph& g_, StateId root_, AlgoNP algo_, const EvalFn& e,
            const TerminalEval& f, const AuditOptions& o, std::vector<FixedPoint> tmax_,
            const MaxnResult* oracle_)
        : g(g_),
          root(root_),
          algo(algo_),
          eval(e),
          ft(f),
          opts(o),
          tmax(std::move(tmax_)),
          tree(g_),
          fz(g_.num_states()),
          oracle(oracle_) {}

    bool member(StateId s) const { return tree.member[s] != 0; }
    bool resolved(StateId s) const { return tree.r[s] != 0; }
    IterationTrace step(std::int64_t iter) {
        return algo == AlgoNP::kUmaxn
                   ? umaxn_iteration_v2(g, tree, root, eval, ft, tmax, iter)
                   : descent_n_iteration_v2(g, tree, root, eval, ft, tmax, iter);
    }
    bool frozen_recorded(StateId s) const { return fz.set[s] != 0; }
    void record_frozen(StateId s) {
        fz.set[s] = 1;
        fz.c[s] = tree.c[s];
        fz.v[s] = tree.v[s];
    }
    bool frozen_matches(StateId s) const {
        return tree.c[s] == fz.c[s] && tree.v[s] == fz.v[s];
    }
    void audit_nonmember(Ctx&, StateId, std::int64_t) {}

    void audit_state(Ctx& ctx, StateId s, std::int64_t iter) {
        bool all_res = true;
        bool kids_ok = true;
        for (StateId ch : g.children(s)) {
            if (!tree.init[ch]) {
                ctx.add("consistency", iter, s, "member has uninitialized child");
                kids_ok = false;
            } else if (!tree.r[ch]) {
                all_res = false;
            }
        }
        bool r = tree.r[s] != 0;
        auto j = static_cast<std::size_t>(g.player_of(s) - 1);
        bool win = tree.c[s][j] == 1 && tree.v[s][j] == tmax[j];
        if (win) {
            bool witness = false;
            for (StateId ch : g.children(s)) {
                if (tree.init[ch] && tree.r[ch] && tree.c[ch] == tree.c[s] &&
                    tree.v[ch] == tree.v[s]) {
                    witness = true;
                    break;
                }
            }
            win = witness;
        }
        if (r && !(win || all_res))
            ctx.add("coupling", iter, s, "resolved without witness or resolved children");
        if (opts.tree_audits && win && !r)
            ctx.add("coupling", iter, s, "winning resolved witness on unresolved state");
        if (opts.tree_audits && kids_ok && all_res && !r)
            ctx.add("coupling", iter, s, "all children resolved but state unresolved");
        if (opts.tree_audits && kids_ok && !g.is_terminal(s)) {
            StateId best =
                best_action_n_v2(g, tree, s, g.children(s), TiePreference::kPreferExplored);
            if (tree.c[s] != tree.c[best] || tree.v[s] != tree.v[best])
                ctx.add("best-child", iter, s, "(c, v) differs from current best child");
        }
        if (oracle && r &&
            (tree.c[s] != oracle->values[s].gain || tree.v[s] != oracle->values[s].eval))
            ctx.add("exactness", iter, s, "resolved (c, v) differs from oracle pair");
    }
};

}  // namespace

AuditReport audited_run_2p(const GameGraph& g, StateId root, Algo2P algo, std::int64_t budget,
                           const EvalFn& eval, const TerminalEval& ft, const AuditOptions& opts) {
    if (g.num_players != 2)
        throw std::invalid_argument("verify: two-player audit requires a two-player game");
    Fam2P fam(g, root, algo, eval, ft, opts);
    return run_audit(g, root, budget, fam, opts);
}

AuditReport audited_run_np_v1(const GameGraph& g, StateId root, AlgoNP algo, std::int64_t budget,
                              const EvalFn& eval, const TerminalEval& ft,
                              const AuditOptions& opts) {
    MaxnResult oracle;
    const MaxnResult* op = nullptr;
    if (opts.check_exactness) {
        auto tie = check_tie_breaking(g, ft);
        if (!tie.ok) throw TieBreakingError(tie);
        oracle = maxn(g, ft);
        op = &oracle;
    }
    FamNPV1 fam(g, root, algo, eval, ft, opts, terminal_eval_max(g, ft), op);
    return run_audit(g, root, budget, fam, opts);
}

AuditReport audited_run_np_v2(const GameGraph& g, StateId root, AlgoNP algo, std::int64_t budget,
                              const EvalFn& eval, const TerminalEval& ft,
                              const AuditOptions& opts) {
    MaxnResult oracle;
    const MaxnResult* op = nullptr;
    if (opts.check_exactness) {
        auto tie = check_tie_breaking(g, ft);
        if (!tie.ok) throw TieBreakingError(tie);
        oracle = maxn(g, ft);
        op = &oracle;
    }
    FamNPV2 fam(g, root, algo, eval, ft, opts, terminal_eval_max(g, ft), op);
    return run_audit(g, root, budget, fam, opts);
}

}  // namespace gametree
