#include <doctest.h>

#include <stdexcept>

#include "gametree/game_gen.hpp"
#include "gametree/oracle.hpp"
#include "gametree/search_np_v1.hpp"
#include "gametree/search_np_v2.hpp"
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

struct RigNP2 {
    GameGraph g;
    SearchTreeNP2 tree;

    explicit RigNP2(int root_player) : g(make_game(root_player)), tree(g) {
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
                   std::uint32_t n, bool resolved) {
        tree.c[s] = std::move(c);
        tree.v[s] = std::move(v);
        tree.visits[0][s - 1] = n;
        tree.r[s] = resolved ? 1 : 0;
    }
};

}  // namespace

TEST_CASE("four-key selector separates resolved wins from unresolved ones") {
    RigNP2 rig(1);
    rig.set_child(1, c8({1, -1, -1}), vf({"0.5", "0", "0"}), 0, true);
    rig.set_child(2, c8({1, -1, -1}), vf({"0.5", "0", "0"}), 0, false);
    CHECK(best_action_n_v2(rig.g, rig.tree, 0, {1, 2}, TiePreference::kPreferExplored) == 1);
}

TEST_CASE("four-key selector: a resolved loss ranks below an unresolved unknown") {
    RigNP2 rig(1);
    rig.set_child(1, c8({-1, 1, 1}), vf({"0.9", "0", "0"}), 0, true);   // r*c = -1
    rig.set_child(2, c8({0, 0, 0}), vf({"0.1", "0", "0"}), 0, false);  // r*c = 0
    CHECK(best_action_n_v2(rig.g, rig.tree, 0, {1, 2}, TiePreference::kPreferExplored) == 2);
}

TEST_CASE("four-key selector: singleton and residual id tie") {
    RigNP2 rig(1);
    rig.set_child(1, c8({0, 0, 0}), vf({"0", "0", "0"}), 0, false);
    rig.set_child(2, c8({0, 0, 0}), vf({"0", "0", "0"}), 0, false);
    CHECK(best_action_n_v2(rig.g, rig.tree, 0, {2}, TiePreference::kPreferExplored) == 2);
    CHECK(best_action_n_v2(rig.g, rig.tree, 0, {1, 2}, TiePreference::kPreferExplored) == 1);
    CHECK_THROWS_AS(best_action_n_v2(rig.g, rig.tree, 0, {}, TiePreference::kPreferExplored),
                    std::invalid_argument);
}

TEST_CASE("witness resolution rule") {
    RigNP2 rig(1);
    auto tmax = vf({"1.0", "1.0", "1.0"});

    // Winning completion at the maximum, matching child resolved: resolved.
    rig.set_child(1, c8({1, -1, -1}), vf({"1.0", "0", "0"}), 0, true);
    rig.set_child(2, c8({0, 0, 0}), vf({"0", "0", "0"}), 0, false);
    rig.tree.c[0] = c8({1, -1, -1});
    rig.tree.v[0] = vf({"1.0", "0", "0"});
    CHECK(backup_resolution_n_v2(rig.g, rig.tree, 0, tmax));

    // Identical store values but the matching child is itself unresolved:
    // the witness clause fails and another child is open.
    rig.set_child(1, c8({1, -1, -1}), vf({"1.0", "0", "0"}), 0, false);
    CHECK_FALSE(backup_resolution_n_v2(rig.g, rig.tree, 0, tmax));

    // All children resolved: resolved regardless of the completion.
    rig.set_child(1, c8({-1, 1, -1}), vf({"-1", "0", "0"}), 0, true);
    rig.set_child(2, c8({0, 0, 0}), vf({"0", "0", "0"}), 0, true);
    rig.tree.c[0] = c8({0, 0, 0});
    rig.tree.v[0] = vf({"0", "0", "0"});
    CHECK(backup_resolution_n_v2(rig.g, rig.tree, 0, tmax));
}

TEST_CASE("a resolved winning child settles the root on the expanding iteration") {
    auto g = testsupport::three_p_choice();
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP2 tree(g);
    umaxn_iteration_v2(g, tree, 0, EvalFn::zero(), ft, tmax, 1);
    CHECK(tree.r[0] == 1);
    CHECK(tree.c[0] == c8({1, -1, -1}));
    CHECK(tree.v[0] == ft.at(1));
}

TEST_CASE("golden backup: the completion is copied down but nothing resolves") {
    // Same expansion as the gated-variant golden test: here the terminal
    // child's completion lands in c(root) directly, and the root still must
    // not resolve (no winning component, open sibling).
    auto g = testsupport::golden4p();
    auto ft = terminal_eval_from_game(g);
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP2 tree(g);
    umaxn_iteration_v2(g, tree, 0, testsupport::golden4p_eval(), ft, tmax, 1);
    CHECK(tree.c[0] == c8({0, 0, 0, -1}));
    CHECK(tree.v[0] == vf({"0", "0", "0", "-1"}));
    CHECK(tree.r[0] == 0);
}

TEST_CASE("an unresolved state can carry a nonzero completion vector") {
    // Two terminals share the winning gain but only the deeper one attains
    // the global maximum of the tie-breaking evaluation. After expanding
    // the middle state, its completion is the shallow win while the state
    // stays unresolved: the zero-completion invariant of the gated variant
    // deliberately does not hold here.
    auto g = testsupport::nonzero_unresolved3p();
    REQUIRE(validate_game(g).ok());
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    REQUIRE(check_tie_breaking(g, ft).ok);
    auto tmax = terminal_eval_max(g, ft);
    REQUIRE(tmax[0] == ft.at(4)[0]);  // the deep terminal holds the maximum

    SearchTreeNP2 tree(g);
    umaxn_iteration_v2(g, tree, 0, EvalFn::zero(), ft, tmax, 1);
    umaxn_iteration_v2(g, tree, 0, EvalFn::zero(), ft, tmax, 2);
    CHECK(tree.member[1]);
    CHECK(tree.r[1] == 0);
    CHECK(tree.c[1] == c8({1, -1, -1}));

    // The run still completes and proves the win within the bound.
    auto res = solve_np_v2(g, 0, AlgoNP::kUmaxn, 2 * g.num_states(), EvalFn::zero(), ft);
    CHECK(res.resolved);
    CHECK(res.c_root == c8({1, -1, -1}));
    CHECK(res.v_root == ft.at(4));
}

TEST_CASE("deep iteration resolves a three-player line at once") {
    auto g = testsupport::line3p();
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP2 tree(g);
    descent_n_iteration_v2(g, tree, 0, EvalFn::zero(), ft, tmax, 1);
    CHECK(tree.r[0] == 1);
    CHECK(tree.c[0] == c8({1, -1, -1}));
}

TEST_CASE("resolved values never change on later iterations") {
    GenParams p;
    p.num_players = 3;
    p.num_states = 40;
    auto g = generate_random_game(17, p);
    auto ft = make_tie_breaking_eval(g, FixedPoint::from_raw(1));
    auto tmax = terminal_eval_max(g, ft);
    SearchTreeNP2 tree(g);

    std::vector<std::optional<std::pair<std::vector<std::int8_t>, std::vector<FixedPoint>>>>
        frozen(g.num_states());
    std::int64_t iters = 0;
    for (std::int64_t i = 1; i <= 100 && !tree.r[0]; ++i, ++iters) {
        umaxn_iteration_v2(g, tree, 0, EvalFn::hashed(3), ft, tmax, i);
        for (StateId s = 0; s < g.num_states(); ++s) {
            if (!tree.member[s] || !tree.r[s]) continue;
            if (!frozen[s]) {
                frozen[s] = {{tree.c[s], tree.v[s]}};
            } else {
                CAPTURE(i);
                REQUIRE(frozen[s]->first == tree.c[s]);
                REQUIRE(frozen[s]->second == tree.v[s]);
            }
        }
    }
    CHECK(tree.r[0] == 1);
    CHECK(iters <= 2 * static_cast<std::int64_t>(g.num_states()));
}

TEST_CASE("decision rules at the root") {
    RigNP2 rig(1);
    // A resolved win beats an unresolved state with the same completion.
    rig.set_child(1, c8({1, -1, -1}), vf({"0.5", "0", "0"}), 0, true);
    rig.set_child(2, c8({1, -1, -1}), vf({"0.5", "0", "0"}), 9, false);
    CHECK(decide_v2(rig.g, rig.tree, 0, NPPolicy::kBest) == 1);
    CHECK(decide_v2(rig.g, rig.tree, 0, NPPolicy::kSafest) == 1);

    // Equal (resolved x completion, completion): safest takes more visits.
    rig.set_child(1, c8({0, 0, 0}), vf({"0.8", "0", "0"}), 2, false);
    rig.set_child(2, c8({0, 0, 0}), vf({"0.1", "0", "0"}), 6, false);
    CHECK(decide_v2(rig.g, rig.tree, 0, NPPolicy::kSafest) == 2);
    CHECK(decide_v2(rig.g, rig.tree, 0, NPPolicy::kBest) == 1);

    SearchTreeNP2 fresh(rig.g);
    CHECK_THROWS_AS(decide_v2(rig.g, fresh, 0, NPPolicy::kBest), std::invalid_argument);
}

TEST_CASE("solve matches the exhaustive values and the gated variant") {
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
            auto v2 = solve_np_v2(g, 0, algo, 2 * g.num_states(), EvalFn::hashed(seed), ft);
            auto v1 = solve_np_v1(g, 0, algo, 2 * g.num_states(), EvalFn::hashed(seed), ft);
            REQUIRE(v2.resolved);
            REQUIRE(v2.c_root == oracle.values[0].gain);
            REQUIRE(v2.v_root == oracle.values[0].eval);
            REQUIRE(v2.c_root == v1.c_root);
            REQUIRE(v2.v_root == v1.v_root);
        }
    }
}

TEST_CASE("solve rejects non-tie-breaking terminal evaluations") {
    auto g = testsupport::ambiguous3p();
    CHECK_THROWS_AS(solve_np_v2(g, 0, AlgoNP::kUmaxn, 10, EvalFn::zero(),
                                terminal_eval_from_gains(g)),
                    TieBreakingError);
}
