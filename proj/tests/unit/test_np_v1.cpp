#include <doctest.h>

#include <stdexcept>

#include "gametree/game_gen.hpp"
#include "gametree/oracle.hpp"
#include "gametree/search_np_v1.hpp"
#include "support/builders.hpp"

using namespace gametree;
using testsupport::fp;

namespace {

std::vector<std::int8_t> c8(std::initializer_list<int> xs) {
    std::vector<std::int8_t> out;
    for (int x : xs) out.push_back(static_cast<std::int8_t>(x));
    return out;
}

std::vector<FixedPoint> vf(std::initializer_list<const char*> xs) {
    std::vector<FixedPoint> out;
    for (const char* x : xs) out.push_back(fp(x));
    return out;
}

/// Three-player root with two terminal children whose store entries are
/// written directly, isolating the selectors and the resolution rule.
struct RigNP1 {
    GameGraph g;
    SearchTreeNP1 tree;

    explicit RigNP1(int root_player) : g(make_game(root_player)), tree(g) {
        for (StateId s = 0; s < 3; ++s) {
            tree.init[s] = 1;
            tree.member[s] = 1;
        }
    }

    static GameGraph make_game(int root_player) {
        auto g = testsupport::three_p_choice();
        g.states[0].player = root_player;
        return g;
    }

    void set_child(StateId s, std::vector<std::int8_t> c, std::vector<FixedPoint> v,
                   std::uint32_t n, bool resolved = false) {
        tree.c[s] = std::move(c);
        tree.v[s] = std::move(v);
        tree.visits[0][s - 1] = n;
        tree.r[s] = resolved ? 1 : 0;
    }
};

}  // namespace

TEST_CASE("vector selector: the mover's completion component dominates") {
    RigNP1 rig(2);  // mover is player 2
    rig.set_child(1, c8({0, 0, 0}), vf({"0", "0.3", "0"}), 0);
    rig.set_child(2, c8({0, 1, 0}), vf({"0", "-1", "0"}), 5);
    CHECK(best_action_n_v1(rig.g, rig.tree, 0, {1, 2}, TiePreference::kPreferExplored) == 2);
}

TEST_CASE("vector selector: visit count decides full value ties") {
    RigNP1 rig(1);
    rig.set_child(1, c8({0, 0, 0}), vf({"0.2", "0", "0"}), 4);
    rig.set_child(2, c8({0, 0, 0}), vf({"0.2", "0", "0"}), 1);
    CHECK(best_action_n_v1(rig.g, rig.tree, 0, {1, 2}, TiePreference::kPreferUnexplored) == 2);
    CHECK(best_action_n_v1(rig.g, rig.tree, 0, {1, 2}, TiePreference::kPreferExplored) == 1);
    // Identical keys fall back to the smallest id.
    rig.set_child(2, c8({0, 0, 0}), vf({"0.2", "0", "0"}), 4);
    CHECK(best_action_n_v1(rig.g, rig.tree, 0, {1, 2}, TiePreference::kPreferExplored) == 1);
}

TEST_CASE("vector selector: singleton candidate set returns its element") {
    RigNP1 rig(1);
    rig.set_child(1, c8({0, 0, 0}), vf({"0", "0", "0"}), 0);
    CHECK(best_action_n_v1(rig.g, rig.tree, 0, {1}, TiePreference::kPreferExplored) == 1);
    CHECK_THROWS_AS(best_action_n_v1(rig.g, rig.tree, 0, {}, TiePreference::kPreferExplored),
                    std::invalid_argument);
}

TEST_CASE("staged resolution rule") {
    RigNP1 rig(1);
    auto tmax = vf({"1.0", "1.0", "1.0"});

    // Mover's staged completion is a win at the global maximum: resolves
    // even though no child is resolved yet.
    rig.set_child(1, c8({0, 0, 0}), vf({"0", "0", "0"}), 0, false);
    rig.set_child(2, c8({0, 0, 0}), vf({"0", "0", "0"}), 0, false);
    rig.tree.c_prime[0] = c8({1, -1, -1});
    rig.tree.v[0] = vf({"1.0", "-1", "-1"});
    CHECK(backup_resolution_n_v1(rig.g, rig.tree, 0, tmax));

    // Same completion but below the maximum: falls through to the children,
    // one of which is open.
    rig.tree.v[0] = vf({"0.9", "-1", "-1"});
    rig.tree.r[1] = 1;
    CHECK_FALSE(backup_resolution_n_v1(rig.g, rig.tree, 0, tmax));

    // Every child resolved: resolves regardless of the staged completion.
    rig.tree.c_prime[0] = c8({0, 0, 0});
    rig.tree.r[2] = 1;
    CHECK(backup_resolution_n_v1(rig.g, rig.tree, 0, tmax));
}

TEST_CASE("one iteration settles the three-player choice") {
    auto g = testsupport::three_p_choice();
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP1 tree(g);
    umaxn_iteration_v1(g, tree, 0, EvalFn::zero(), ft, tmax, 1);
    CHECK(tree.r[0] == 1);
    CHECK(tree.c[0] == c8({1, -1, -1}));
    CHECK(tree.c_prime[0] == c8({1, -1, -1}));
    CHECK(tree.v[0] == ft.at(1));

    // Re-running on the resolved root is a no-op.
    auto c_before = tree.c;
    auto v_before = tree.v;
    auto t = umaxn_iteration_v1(g, tree, 0, EvalFn::zero(), ft, tmax, 2);
    CHECK(t.added.empty());
    CHECK(t.flips.empty());
    CHECK(tree.c == c_before);
    CHECK(tree.v == v_before);
}

TEST_CASE("golden backup: staged completion without resolution") {
    // Expanding the four-player root stages the terminal child's completion
    // (picked on the value key: 0 beats -1 for the mover) but must leave the
    // root's own completion at zero because the other child is open.
    auto g = testsupport::golden4p();
    REQUIRE(validate_game(g).ok());
    auto ft = terminal_eval_from_game(g);
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP1 tree(g);
    umaxn_iteration_v1(g, tree, 0, testsupport::golden4p_eval(), ft, tmax, 1);
    CHECK(tree.c_prime[0] == c8({0, 0, 0, -1}));
    CHECK(tree.v[0] == vf({"0", "0", "0", "-1"}));
    CHECK(tree.r[0] == 0);
    CHECK(tree.c[0] == c8({0, 0, 0, 0}));
}

TEST_CASE("deep iteration resolves a three-player line at once") {
    auto g = testsupport::line3p();
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP1 tree(g);
    descent_n_iteration_v1(g, tree, 0, EvalFn::zero(), ft, tmax, 1);
    CHECK(tree.r[0] == 1);
    CHECK(tree.c[0] == c8({1, -1, -1}));

    // Terminal root: settled immediately with its exact values.
    SearchTreeNP1 tree2(g);
    descent_n_iteration_v1(g, tree2, 2, EvalFn::zero(), ft, tmax, 1);
    CHECK(tree2.r[2] == 1);
    CHECK(tree2.c[2] == c8({1, -1, -1}));
    CHECK(tree2.v[2] == ft.at(2));
}

TEST_CASE("unresolved members keep a zero completion vector throughout") {
    GenParams p;
    p.num_players = 3;
    p.num_states = 30;
    auto g = generate_random_game(11, p);
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP1 tree(g);
    std::vector<std::int8_t> zero(3, 0);
    for (std::int64_t i = 1; i <= 2 * g.num_states() && !tree.r[0]; ++i) {
        umaxn_iteration_v1(g, tree, 0, EvalFn::hashed(5), ft, tmax, i);
        for (StateId s = 0; s < g.num_states(); ++s)
            if (tree.member[s] && !tree.r[s]) {
                CAPTURE(i);
                REQUIRE(tree.c[s] == zero);
            }
    }
    CHECK(tree.r[0] == 1);
}

TEST_CASE("decision rules at the root") {
    RigNP1 rig(1);
    // Completion wins over any visit count or value under both policies.
    rig.set_child(1, c8({1, -1, -1}), vf({"0.9", "0", "0"}), 0, true);
    rig.set_child(2, c8({0, 0, 0}), vf({"0.99", "0", "0"}), 100);
    CHECK(decide_v1(rig.g, rig.tree, 0, NPPolicy::kSafest) == 1);
    CHECK(decide_v1(rig.g, rig.tree, 0, NPPolicy::kBest) == 1);

    // On tied completion the safest rule prefers visits, the best rule
    // prefers value.
    rig.set_child(1, c8({0, 0, 0}), vf({"0.2", "0", "0"}), 3);
    rig.set_child(2, c8({0, 0, 0}), vf({"0.1", "0", "0"}), 7);
    CHECK(decide_v1(rig.g, rig.tree, 0, NPPolicy::kSafest) == 2);
    CHECK(decide_v1(rig.g, rig.tree, 0, NPPolicy::kBest) == 1);
}

TEST_CASE("decision on an unexpanded root is an error") {
    auto g = testsupport::three_p_choice();
    SearchTreeNP1 tree(g);
    CHECK_THROWS_AS(decide_v1(g, tree, 0, NPPolicy::kBest), std::invalid_argument);
}

TEST_CASE("solve runs to resolution and matches the exhaustive values") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        GenParams p;
        p.num_players = 3 + static_cast<int>(seed % 2);
        p.num_states = 10 + static_cast<StateId>(seed % 40);
        p.draw_rate = (seed % 2) * 0.3;
        auto g = generate_random_game(seed, p);
        auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
        auto oracle = maxn(g, ft);
        REQUIRE(oracle.unique);
        CAPTURE(seed);
        for (auto algo : {AlgoNP::kUmaxn, AlgoNP::kDescent}) {
            auto res = solve_np_v1(g, 0, algo, 2 * g.num_states(), EvalFn::hashed(seed), ft);
            REQUIRE(res.resolved);
            REQUIRE(res.iterations <= 2 * static_cast<std::int64_t>(g.num_states()));
            REQUIRE(res.c_root == oracle.values[0].gain);
            REQUIRE(res.v_root == oracle.values[0].eval);
        }
    }
}

TEST_CASE("solve rejects terminal evaluations that cannot break ties") {
    auto g = testsupport::ambiguous3p();
    auto ft = terminal_eval_from_gains(g);
    try {
        solve_np_v1(g, 0, AlgoNP::kUmaxn, 10, EvalFn::zero(), ft);
        FAIL("expected TieBreakingError");
    } catch (const TieBreakingError& e) {
        CHECK_FALSE(e.report.ok);
        CHECK(e.report.first == 1);
        CHECK(e.report.second == 2);
    }
}

TEST_CASE("solve preconditions and edge cases") {
    auto g = testsupport::three_p_choice();
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    CHECK_THROWS_AS(solve_np_v1(g, 0, AlgoNP::kUmaxn, 0, EvalFn::zero(), ft),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_np_v1(g, 9, AlgoNP::kUmaxn, 5, EvalFn::zero(), ft),
                    std::invalid_argument);

    // Terminal root: resolved with no action to report.
    auto res = solve_np_v1(g, 1, AlgoNP::kUmaxn, 5, EvalFn::zero(), ft);
    CHECK(res.resolved);
    CHECK_FALSE(res.chosen_action.has_value());
}

TEST_CASE("deep solve on an unresolved root uses the exploration rule") {
    // Budget 1 expands the root of the line but cannot resolve it; the
    // decision must still pick the only child, deterministically.
    auto g = testsupport::line3p();
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    auto res = solve_np_v1(g, 0, AlgoNP::kDescent, 1, EvalFn::zero(), ft);
    CHECK(res.resolved);  // the line resolves in one deep iteration

    GenParams p;
    p.num_players = 3;
    p.num_states = 60;
    auto big = generate_random_game(21, p);
    auto bft = make_tie_breaking_eval(big, FixedPoint::from_raw(1));
    SolveNPOptions opts;
    opts.exploration.kind = ExplorationHook::Kind::kSoftmax;
    opts.exploration.seed = 99;
    auto a = solve_np_v1(big, 0, AlgoNP::kDescent, 2, EvalFn::hashed(1), bft, NPPolicy::kBest, opts);
    auto b = solve_np_v1(big, 0, AlgoNP::kDescent, 2, EvalFn::hashed(1), bft, NPPolicy::kBest, opts);
    REQUIRE(a.chosen_action.has_value());
    CHECK(a.chosen_action == b.chosen_action);  // seeded sampling reproduces
}
