// Python bindings for the core operations: generate/parse/serialize/validate
// games, query the exact oracles, run the solvers, and run audited solves.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gametree/eval.hpp"
#include "gametree/game.hpp"
#include "gametree/game_gen.hpp"
#include "gametree/game_io.hpp"
#include "gametree/oracle.hpp"
#include "gametree/run_config.hpp"
#include "gametree/search2p.hpp"
#include "gametree/search_np_v1.hpp"
#include "gametree/search_np_v2.hpp"
#include "gametree/verify.hpp"

namespace py = pybind11;
using namespace gametree;

namespace {

std::vector<double> to_doubles(const std::vector<FixedPoint>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (auto x : v) out.push_back(x.to_double());
    return out;
}

std::vector<int> to_ints(const std::vector<std::int8_t>& v) {
    return std::vector<int>(v.begin(), v.end());
}

struct AlgoSpec {
    bool two_player;
    bool v1;
    Algo2P algo2p;
    AlgoNP algonp;
};

AlgoSpec parse_algo(const std::string& name) {
    if (name == "ubfm") return {true, false, Algo2P::kUbfm, AlgoNP::kUmaxn};
    if (name == "descent") return {true, false, Algo2P::kDescent, AlgoNP::kUmaxn};
    if (name == "umaxn1") return {false, true, Algo2P::kUbfm, AlgoNP::kUmaxn};
    if (name == "descentn1") return {false, true, Algo2P::kUbfm, AlgoNP::kDescent};
    if (name == "umaxn2") return {false, false, Algo2P::kUbfm, AlgoNP::kUmaxn};
    if (name == "descentn2") return {false, false, Algo2P::kUbfm, AlgoNP::kDescent};
    throw std::invalid_argument(
        "unknown algo: " + name + " (want ubfm | descent | umaxn1 | descentn1 | umaxn2 | descentn2)");
}

NPPolicy parse_policy(const std::string& p) {
    if (p == "best") return NPPolicy::kBest;
    if (p == "safest") return NPPolicy::kSafest;
    throw std::invalid_argument("unknown policy: " + p + " (want best | safest)");
}

std::int64_t effective_budget(const GameGraph& g, std::int64_t budget) {
    return budget == 0 ? 2 * static_cast<std::int64_t>(g.num_states()) : budget;
}

py::dict solve(const GameGraph& g, const std::string& algo_name, std::int64_t budget,
               StateId root, const std::string& eval_spec, const std::string& teval_spec,
               const std::string& policy) {
    AlgoSpec algo = parse_algo(algo_name);
    auto eval = eval_from_spec(eval_spec);
    auto ft = teval_from_spec(g, teval_spec);
    std::int64_t b = effective_budget(g, budget);
    py::dict out;
    if (algo.two_player) {
        auto res = solve2p(g, root, algo.algo2p, b, eval, ft);
        out["resolved"] = res.resolved;
        out["c_root"] = static_cast<int>(res.c_root);
        out["v_root"] = res.v_root.to_double();
        out["iterations"] = res.iterations;
        out["nodes"] = res.nodes;
        out["chosen_action"] =
            res.best_child ? py::cast(*res.best_child) : py::object(py::none());
    } else {
        auto res = algo.v1 ? solve_np_v1(g, root, algo.algonp, b, eval, ft, parse_policy(policy))
                           : solve_np_v2(g, root, algo.algonp, b, eval, ft, parse_policy(policy));
        out["resolved"] = res.resolved;
        out["c_root"] = to_ints(res.c_root);
        out["v_root"] = to_doubles(res.v_root);
        out["iterations"] = res.iterations;
        out["nodes"] = res.nodes;
        out["variant"] = algo.v1 ? "v1" : "v2";
        out["chosen_action"] =
            res.chosen_action ? py::cast(*res.chosen_action) : py::object(py::none());
    }
    return out;
}

py::dict verify(const GameGraph& g, const std::string& algo_name, std::int64_t budget,
                StateId root, const std::string& eval_spec, const std::string& teval_spec,
                bool tree_audits) {
    AlgoSpec algo = parse_algo(algo_name);
    auto eval = eval_from_spec(eval_spec);
    auto ft = teval_from_spec(g, teval_spec);
    AuditOptions opts;
    opts.tree_audits = tree_audits;
    AuditReport rep;
    if (algo.two_player)
        rep = audited_run_2p(g, root, algo.algo2p, budget, eval, ft, opts);
    else if (algo.v1)
        rep = audited_run_np_v1(g, root, algo.algonp, budget, eval, ft, opts);
    else
        rep = audited_run_np_v2(g, root, algo.algonp, budget, eval, ft, opts);
    py::list violations;
    for (const auto& v : rep.violations) {
        py::dict d;
        d["invariant"] = v.invariant;
        d["iter"] = v.iter;
        d["state"] = v.state ? py::cast(*v.state) : py::object(py::none());
        d["message"] = v.message;
        violations.append(d);
    }
    py::dict out;
    out["ok"] = rep.ok();
    out["resolved"] = rep.resolved;
    out["iterations"] = rep.iterations;
    out["violation_count"] = rep.violation_count;
    out["violations"] = violations;
    return out;
}

}  // namespace

PYBIND11_MODULE(gametree_py, m) {
    m.doc() = "Best-first game search with completion: games, solvers, oracles, audits";

    py::class_<GameGraph>(m, "Game")
        .def_property_readonly("players", [](const GameGraph& g) { return g.num_players; })
        .def_property_readonly("num_states", [](const GameGraph& g) { return g.num_states(); })
        .def("children", [](const GameGraph& g, StateId s) { return g.children(s); })
        .def("player_of", [](const GameGraph& g, StateId s) { return g.player_of(s); })
        .def("is_terminal", [](const GameGraph& g, StateId s) { return g.is_terminal(s); })
        .def("terminal_ids", &GameGraph::terminal_ids)
        .def("__eq__", [](const GameGraph& a, const GameGraph& b) { return a == b; });

    m.def(
        "generate",
        [](std::uint64_t seed, int players, StateId states, int max_children, double dag_density,
           double draw_rate) {
            GenParams p;
            p.num_players = players;
            p.num_states = states;
            p.max_children = max_children;
            p.dag_density = dag_density;
            p.draw_rate = draw_rate;
            return generate_random_game(seed, p);
        },
        py::arg("seed"), py::arg("players") = 2, py::arg("states") = 20,
        py::arg("max_children") = 3, py::arg("dag_density") = 0.0, py::arg("draw_rate") = 0.0,
        "Deterministic random game for the given seed and shape parameters.");

    m.def("parse", [](const std::string& text) { return parse_game(text); },
          py::arg("text"), "Parse a game from its JSON text.");
    m.def("serialize", [](const GameGraph& g) { return serialize_game(g); }, py::arg("game"),
          "Serialize a game to its canonical JSON text.");
    m.def(
        "validate",
        [](const GameGraph& g) {
            std::vector<std::string> out;
            for (const auto& v : validate_game(g).violations) {
                std::string msg = v.message;
                if (v.state) msg += " (state " + std::to_string(*v.state) + ")";
                out.push_back(std::move(msg));
            }
            return out;
        },
        py::arg("game"), "Structural violations; empty means the game is valid.");

    m.def("minimax", [](const GameGraph& g) { return to_ints(minimax(g)); }, py::arg("game"),
          "Exact two-player value in {-1,0,1} for every state.");
    m.def(
        "maxn",
        [](const GameGraph& g, const std::string& teval_spec) {
            auto res = maxn(g, teval_from_spec(g, teval_spec));
            py::list gains, evals;
            for (const auto& v : res.values) {
                gains.append(to_ints(v.gain));
                evals.append(to_doubles(v.eval));
            }
            py::dict out;
            out["gains"] = gains;
            out["evals"] = evals;
            out["unique"] = res.unique;
            return out;
        },
        py::arg("game"), py::arg("teval") = "auto",
        "Exact multiplayer (gain, eval) pair for every state, with ambiguity flag.");

    m.def("check_tie_breaking",
          [](const GameGraph& g, const std::string& teval_spec) {
              auto rep = check_tie_breaking(g, teval_from_spec(g, teval_spec));
              py::dict out;
              out["ok"] = rep.ok;
              if (!rep.ok) {
                  out["first"] = rep.first;
                  out["second"] = rep.second;
                  out["reason"] = rep.reason;
              }
              return out;
          },
          py::arg("game"), py::arg("teval") = "auto");

    m.def("solve", &solve, py::arg("game"), py::arg("algo"), py::arg("budget") = 0,
          py::arg("root") = 0, py::arg("eval") = "zero", py::arg("teval") = "auto",
          py::arg("policy") = "best",
          "Run a solver until resolution or budget exhaustion (budget 0 = twice the state "
          "count).");

    m.def("verify", &verify, py::arg("game"), py::arg("algo"), py::arg("budget") = 0,
          py::arg("root") = 0, py::arg("eval") = "zero", py::arg("teval") = "auto",
          py::arg("tree_audits") = true,
          "Run a solver under per-iteration invariant audits and report violations.");
}
