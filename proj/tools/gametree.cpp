// Command line front end: generate games, solve them, query the
// brute-force oracles, audit solver invariants, and benchmark.
//
// Exit codes: 0 success/resolved, 2 budget or wall-clock exhausted,
// 3 bad input or precondition, 1 internal error or invariant violation.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gametree/eval.hpp"
#include "gametree/game.hpp"
#include "gametree/game_gen.hpp"
#include "gametree/game_io.hpp"
#include "gametree/oracle.hpp"
#include "gametree/run_config.hpp"
#include "gametree/search2p.hpp"
#include "gametree/search_np_v1.hpp"
#include "gametree/search_np_v2.hpp"
#include "gametree/trace.hpp"
#include "gametree/verify.hpp"

namespace {

using gametree::StateId;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitBudget = 2;
constexpr int kExitPrecondition = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

gametree::GameGraph load_game(const std::string& path) {
    gametree::GameGraph g = gametree::parse_game(read_file(path));
    auto rep = gametree::validate_game(g);
    if (!rep.ok()) {
        std::string msg = path + ": invalid game: " + rep.violations.front().message;
        if (rep.violations.front().state)
            msg += " (state " + std::to_string(*rep.violations.front().state) + ")";
        throw UsageError(msg);
    }
    return g;
}

enum class AlgoId { kUbfm, kDescent, kUmaxn1, kDescentN1, kUmaxn2, kDescentN2 };

AlgoId parse_algo(const std::string& name) {
    if (name == "ubfm") return AlgoId::kUbfm;
    if (name == "descent") return AlgoId::kDescent;
    if (name == "umaxn1") return AlgoId::kUmaxn1;
    if (name == "descentn1") return AlgoId::kDescentN1;
    if (name == "umaxn2") return AlgoId::kUmaxn2;
    if (name == "descentn2") return AlgoId::kDescentN2;
    throw UsageError("unknown algo: " + name +
                     " (want ubfm | descent | umaxn1 | descentn1 | umaxn2 | descentn2)");
}

bool is_two_player_algo(AlgoId a) { return a == AlgoId::kUbfm || a == AlgoId::kDescent; }

double to_ms(std::chrono::steady_clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
}

ordered_json fixed_vec_json(const std::vector<gametree::FixedPoint>& v) {
    ordered_json arr = ordered_json::array();
    for (auto x : v) arr.push_back(x.to_double());
    return arr;
}

std::string fixed_vec_text(const std::vector<gametree::FixedPoint>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i].to_string();
    }
    return out + "]";
}

std::string int_vec_text(const std::vector<std::int8_t>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

struct SolveArgs {
    std::string game_path;
    std::string algo = "ubfm";
    std::string eval = "zero";
    std::string teval = "auto";
    std::string policy = "best";
    std::string trace_path;
    StateId root = 0;
    std::int64_t budget = 0;  // 0 = default 2|S|
    double max_seconds = 0.0;
    bool json = false;
};

void add_solve_flags(CLI::App* cmd, SolveArgs& a, bool with_trace) {
    cmd->add_option("game", a.game_path, "game JSON file")->required();
    cmd->add_option("--algo", a.algo,
                    "ubfm | descent | umaxn1 | descentn1 | umaxn2 | descentn2");
    cmd->add_option("--root", a.root, "root state id (default 0)");
    cmd->add_option("--budget", a.budget, "iteration budget (default: twice the state count)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eval", a.eval, "zero | hashed:SEED | table:PATH");
    cmd->add_option("--teval", a.teval, "auto | gains | tiebreak:EPS | table:PATH");
    cmd->add_option("--policy", a.policy, "best | safest (decision rule)");
    cmd->add_option("--max-seconds", a.max_seconds, "soft wall-clock cap (abort, exit 2)");
    cmd->add_flag("--json", a.json, "machine-readable output");
    if (with_trace)
        cmd->add_option("--trace", a.trace_path, "write per-iteration JSON lines ('-' = stdout)");
}

std::int64_t effective_budget(const gametree::GameGraph& g, std::int64_t budget) {
    if (budget == 0) return 2 * static_cast<std::int64_t>(g.num_states());
    if (budget < 0) throw UsageError("budget must be positive");
    return budget;
}

gametree::NPPolicy parse_policy(const std::string& p) {
    if (p == "best") return gametree::NPPolicy::kBest;
    if (p == "safest") return gametree::NPPolicy::kSafest;
    throw UsageError("unknown policy: " + p + " (want best | safest)");
}

int cmd_solve(const SolveArgs& a) {
    gametree::GameGraph g = load_game(a.game_path);
    AlgoId algo = parse_algo(a.algo);
    if (a.root >= g.num_states()) throw UsageError("root out of range");
    if (a.budget == 0 && g.num_states() == 0) throw UsageError("empty game");
    if (is_two_player_algo(algo) && g.num_players != 2)
        throw UsageError("algo " + a.algo + " requires a two-player game");
    std::int64_t budget = effective_budget(g, a.budget);
    auto eval = gametree::eval_from_spec(a.eval);
    auto ft = gametree::teval_from_spec(g, a.teval);
    bool want_trace = !a.trace_path.empty();

    bool resolved = false, timed_out = false;
    ordered_json out;
    std::string text;
    std::vector<std::string> trace_lines;

    if (is_two_player_algo(algo)) {
        gametree::Solve2POptions opts;
        opts.collect_traces = want_trace;
        opts.max_seconds = a.max_seconds;
        auto res = gametree::solve2p(
            g, a.root, algo == AlgoId::kUbfm ? gametree::Algo2P::kUbfm : gametree::Algo2P::kDescent,
            budget, eval, ft, opts);
        resolved = res.resolved;
        timed_out = res.timed_out;
        out = {{"resolved", res.resolved},
               {"timed_out", res.timed_out},
               {"c_root", res.c_root},
               {"v_root", res.v_root.to_double()},
               {"iterations", res.iterations},
               {"nodes", res.nodes}};
        if (res.best_child) out["chosen_action"] = *res.best_child;
        text = "resolved: " + std::string(res.resolved ? "true" : "false") +
               "\nc(root): " + std::to_string(res.c_root) + "\nv(root): " + res.v_root.to_string() +
               "\niterations: " + std::to_string(res.iterations) +
               "\nnodes: " + std::to_string(res.nodes) + "\n";
        if (res.best_child) text += "chosen_action: " + std::to_string(*res.best_child) + "\n";
        for (const auto& t : res.traces) trace_lines.push_back(gametree::trace_json_line(t));
    } else {
        bool v1 = algo == AlgoId::kUmaxn1 || algo == AlgoId::kDescentN1;
        gametree::AlgoNP np_algo = (algo == AlgoId::kUmaxn1 || algo == AlgoId::kUmaxn2)
                                       ? gametree::AlgoNP::kUmaxn
                                       : gametree::AlgoNP::kDescent;
        gametree::SolveNPOptions opts;
        opts.collect_traces = want_trace;
        opts.max_seconds = a.max_seconds;
        auto policy = parse_policy(a.policy);
        auto res = v1 ? gametree::solve_np_v1(g, a.root, np_algo, budget, eval, ft, policy, opts)
                      : gametree::solve_np_v2(g, a.root, np_algo, budget, eval, ft, policy, opts);
        resolved = res.resolved;
        timed_out = res.timed_out;
        out = {{"resolved", res.resolved},
               {"timed_out", res.timed_out},
               {"c_root", res.c_root},
               {"v_root", fixed_vec_json(res.v_root)},
               {"iterations", res.iterations},
               {"nodes", res.nodes},
               {"variant", v1 ? "v1" : "v2"}};
        if (res.chosen_action) out["chosen_action"] = *res.chosen_action;
        text = "resolved: " + std::string(res.resolved ? "true" : "false") +
               "\nc(root): " + int_vec_text(res.c_root) + "\nv(root): " + fixed_vec_text(res.v_root) +
               "\niterations: " + std::to_string(res.iterations) +
               "\nnodes: " + std::to_string(res.nodes) + "\n";
        if (res.chosen_action) text += "chosen_action: " + std::to_string(*res.chosen_action) + "\n";
        const char* variant = v1 ? "v1" : "v2";
        for (const auto& t : res.traces)
            trace_lines.push_back(gametree::trace_json_line(t, variant));
    }

    if (want_trace) {
        std::string all;
        for (const auto& l : trace_lines) all += l + "\n";
        write_output(a.trace_path, all);
    }
    if (a.json)
        std::cout << out.dump() << "\n";
    else
        std::cout << text;
    if (resolved) return kExitOk;
    (void)timed_out;
    return kExitBudget;
}

int cmd_gen(const gametree::GenParams& params, std::uint64_t seed, const std::string& out_path) {
    auto g = gametree::generate_random_game(seed, params);
    write_output(out_path, gametree::serialize_game(g));
    return kExitOk;
}

int cmd_oracle(const std::string& game_path, const std::string& teval_spec, bool all, bool json) {
    gametree::GameGraph g = load_game(game_path);
    auto ft = gametree::teval_from_spec(g, teval_spec);
    auto mx = gametree::maxn(g, ft);
    std::optional<std::vector<std::int8_t>> mm;
    if (g.num_players == 2) mm = gametree::minimax(g);

    ordered_json out;
    std::string text;
    if (mm) {
        out["minimax_root"] = (*mm)[0];
        text += "minimax(root): " + std::to_string((*mm)[0]) + "\n";
        if (all) out["minimax"] = *mm;
    }
    out["maxn_root"] = {{"gain", mx.values[0].gain}, {"eval", fixed_vec_json(mx.values[0].eval)}};
    out["unique"] = mx.unique;
    text += "maxn(root): gain " + int_vec_text(mx.values[0].gain) + ", eval " +
            fixed_vec_text(mx.values[0].eval) + "\nunique: " + (mx.unique ? "true" : "false") +
            "\n";
    if (all) {
        ordered_json arr = ordered_json::array();
        for (const auto& v : mx.values)
            arr.push_back({{"gain", v.gain}, {"eval", fixed_vec_json(v.eval)}});
        out["maxn"] = arr;
    }
    std::cout << (json ? out.dump() + "\n" : text);
    return kExitOk;
}

int cmd_verify(const SolveArgs& a, const std::vector<std::uint64_t>& seeds, bool no_tree_audits,
               const std::string& check_trace_path, StateId check_trace_states) {
    if (!check_trace_path.empty()) {
        if (check_trace_states == 0) throw UsageError("--check-trace requires --states");
        auto res = gametree::check_trace_lines(read_file(check_trace_path), check_trace_states);
        if (res.ok) {
            std::cout << "trace ok\n";
            return kExitOk;
        }
        std::cout << "trace violation: " << res.error << "\n";
        return kExitInternal;
    }

    gametree::GameGraph g = load_game(a.game_path);
    AlgoId algo = parse_algo(a.algo);
    if (a.root >= g.num_states()) throw UsageError("root out of range");
    if (is_two_player_algo(algo) && g.num_players != 2)
        throw UsageError("algo " + a.algo + " requires a two-player game");
    std::int64_t budget = effective_budget(g, a.budget);
    auto ft = gametree::teval_from_spec(g, a.teval);

    gametree::AuditOptions opts;
    opts.tree_audits = !no_tree_audits;

    std::vector<gametree::EvalFn> evals;
    std::vector<std::string> labels;
    if (seeds.empty()) {
        evals.push_back(gametree::eval_from_spec(a.eval));
        labels.push_back(a.eval);
    } else {
        for (auto s : seeds) {
            evals.push_back(gametree::EvalFn::hashed(s));
            labels.push_back("hashed:" + std::to_string(s));
        }
    }

    bool any_violation = false;
    bool all_resolved = true;
    ordered_json runs = ordered_json::array();
    std::string text;
    for (std::size_t i = 0; i < evals.size(); ++i) {
        gametree::AuditReport rep;
        if (is_two_player_algo(algo)) {
            rep = gametree::audited_run_2p(
                g, a.root,
                algo == AlgoId::kUbfm ? gametree::Algo2P::kUbfm : gametree::Algo2P::kDescent,
                budget, evals[i], ft, opts);
        } else {
            bool v1 = algo == AlgoId::kUmaxn1 || algo == AlgoId::kDescentN1;
            gametree::AlgoNP np_algo = (algo == AlgoId::kUmaxn1 || algo == AlgoId::kUmaxn2)
                                           ? gametree::AlgoNP::kUmaxn
                                           : gametree::AlgoNP::kDescent;
            rep = v1 ? gametree::audited_run_np_v1(g, a.root, np_algo, budget, evals[i], ft, opts)
                     : gametree::audited_run_np_v2(g, a.root, np_algo, budget, evals[i], ft, opts);
        }
        any_violation = any_violation || !rep.ok();
        all_resolved = all_resolved && rep.resolved;
        ordered_json run = {{"eval", labels[i]},
                            {"resolved", rep.resolved},
                            {"iterations", rep.iterations},
                            {"violations", rep.violation_count}};
        text += "eval " + labels[i] + ": " + (rep.resolved ? "resolved" : "NOT resolved") + " in " +
                std::to_string(rep.iterations) + " iterations, " +
                std::to_string(rep.violation_count) + " violations\n";
        if (!rep.violations.empty()) {
            const auto& v = rep.violations.front();
            ordered_json jv = {{"invariant", v.invariant}, {"iter", v.iter}, {"message", v.message}};
            if (v.state) jv["state"] = *v.state;
            run["first_violation"] = jv;
            text += "  first violation: " + v.invariant + " at iteration " +
                    std::to_string(v.iter) +
                    (v.state ? " state " + std::to_string(*v.state) : std::string()) + ": " +
                    v.message + "\n";
        }
        runs.push_back(run);
    }
    if (a.json)
        std::cout << ordered_json{{"runs", runs}, {"ok", !any_violation}}.dump() << "\n";
    else
        std::cout << text << (any_violation ? "FAIL\n" : "OK\n");
    if (any_violation) return kExitInternal;
    return all_resolved ? kExitOk : kExitBudget;
}

gametree::GameGraph make_line_game(StateId length) {
    gametree::GameGraph g;
    g.num_players = 2;
    g.states.resize(length);
    for (StateId s = 0; s + 1 < length; ++s) {
        g.states[s].children = {s + 1};
        g.states[s].player = static_cast<int>(s % 2) + 1;
    }
    g.states[length - 1].gain = {1, -1};
    return g;
}

int cmd_bench(const std::string& out_path) {
    struct Row {
        std::string game;
        std::string algo;
        std::int64_t iterations;
        std::size_t nodes;
        double ms;
    };
    std::vector<Row> rows;

    auto run2p = [&](const std::string& name, const gametree::GameGraph& g) {
        auto ft = gametree::terminal_eval_from_gains(g);
        auto eval = gametree::EvalFn::hashed(7);
        for (auto [algo, label] : {std::pair{gametree::Algo2P::kUbfm, "ubfm"},
                                   std::pair{gametree::Algo2P::kDescent, "descent"}}) {
            auto t0 = std::chrono::steady_clock::now();
            auto res = gametree::solve2p(g, 0, algo, 2 * g.num_states(), eval, ft);
            rows.push_back({name, label, res.iterations, res.nodes,
                            to_ms(std::chrono::steady_clock::now() - t0)});
        }
    };
    auto run_np = [&](const std::string& name, const gametree::GameGraph& g) {
        auto eps = gametree::FixedPoint::from_raw(1);  // 10^-6
        auto ft = gametree::make_tie_breaking_eval(g, eps);
        auto eval = gametree::EvalFn::hashed(7);
        struct NpAlgo {
            const char* label;
            bool v1;
            gametree::AlgoNP algo;
        };
        for (auto [label, v1, algo] : {NpAlgo{"umaxn1", true, gametree::AlgoNP::kUmaxn},
                                       NpAlgo{"descentn1", true, gametree::AlgoNP::kDescent},
                                       NpAlgo{"umaxn2", false, gametree::AlgoNP::kUmaxn},
                                       NpAlgo{"descentn2", false, gametree::AlgoNP::kDescent}}) {
            auto t0 = std::chrono::steady_clock::now();
            auto res =
                v1 ? gametree::solve_np_v1(g, 0, algo, 2 * g.num_states(), eval, ft)
                   : gametree::solve_np_v2(g, 0, algo, 2 * g.num_states(), eval, ft);
            rows.push_back({name, label, res.iterations, res.nodes,
                            to_ms(std::chrono::steady_clock::now() - t0)});
        }
    };

    for (StateId len : {8u, 16u, 32u}) run2p("line-" + std::to_string(len), make_line_game(len));
    for (std::uint64_t seed : {1ull, 2ull}) {
        for (StateId n : {30u, 60u, 120u}) {
            gametree::GenParams p;
            p.num_states = n;
            run2p("rand2p-" + std::to_string(n) + "-s" + std::to_string(seed),
                  gametree::generate_random_game(seed, p));
        }
    }
    for (std::uint64_t seed : {1ull, 2ull}) {
        gametree::GenParams p3;
        p3.num_players = 3;
        p3.num_states = 40;
        run_np("rand3p-40-s" + std::to_string(seed), gametree::generate_random_game(seed, p3));
        gametree::GenParams p4;
        p4.num_players = 4;
        p4.num_states = 80;
        run_np("rand4p-80-s" + std::to_string(seed), gametree::generate_random_game(seed, p4));
    }

    std::string csv = "game,algo,iterations,nodes,walltime_ms\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.3f", r.ms);
        csv += r.game + "," + r.algo + "," + std::to_string(r.iterations) + "," +
               std::to_string(r.nodes) + "," + buf + "\n";
    }
    write_output(out_path, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Game-graph search lab: best-first solvers with completion, "
                 "brute-force oracles, invariant audits and benchmarks"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random game file");
    gametree::GenParams gen_params;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--players", gen_params.num_players, "number of players (>= 2)");
    gen->add_option("--states", gen_params.num_states, "number of states");
    gen->add_option("--max-children", gen_params.max_children, "max out-degree");
    gen->add_option("--dag-density", gen_params.dag_density, "extra shared-edge fraction [0,1]");
    gen->add_option("--draw-rate", gen_params.draw_rate, "probability of 0 gain components");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");

    // solve
    auto* solve = app.add_subcommand("solve", "run a search algorithm on a game");
    SolveArgs solve_args;
    add_solve_flags(solve, solve_args, true);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact values by exhaustive traversal");
    std::string oracle_game, oracle_teval = "auto";
    bool oracle_all = false, oracle_json = false;
    oracle->add_option("game", oracle_game, "game JSON file")->required();
    oracle->add_option("--teval", oracle_teval, "auto | gains | tiebreak:EPS | table:PATH");
    oracle->add_flag("--all", oracle_all, "include per-state values");
    oracle->add_flag("--json", oracle_json, "machine-readable output");

    // verify
    auto* verify = app.add_subcommand("verify", "run a solver under invariant audits");
    SolveArgs verify_args;
    std::vector<std::uint64_t> verify_seeds;
    bool no_tree_audits = false;
    std::string check_trace_path;
    StateId check_trace_states = 0;
    verify->add_option("game", verify_args.game_path, "game JSON file");
    verify->add_option("--algo", verify_args.algo,
                       "ubfm | descent | umaxn1 | descentn1 | umaxn2 | descentn2");
    verify->add_option("--root", verify_args.root, "root state id (default 0)");
    verify->add_option("--budget", verify_args.budget,
                       "iteration budget (default: twice the state count)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--eval", verify_args.eval, "zero | hashed:SEED | table:PATH");
    verify->add_option("--teval", verify_args.teval, "auto | gains | tiebreak:EPS | table:PATH");
    verify->add_option("--seeds", verify_seeds,
                       "hashed eval seeds; audits run once per seed")
        ->delimiter(',');
    verify->add_flag("--no-tree-audits", no_tree_audits,
                     "skip audits that assume a tree-shaped game (use on DAGs)");
    verify->add_option("--check-trace", check_trace_path, "audit a trace file instead of running");
    verify->add_option("--states", check_trace_states, "state count for --check-trace");
    verify->add_flag("--json", verify_args.json, "machine-readable output");

    // bench
    auto* bench = app.add_subcommand("bench", "fixed-seed benchmark suite, CSV output");
    std::string bench_out;
    bench->add_option("-o,--out", bench_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen(gen_params, gen_seed, gen_out);
        if (solve->parsed()) return cmd_solve(solve_args);
        if (oracle->parsed()) return cmd_oracle(oracle_game, oracle_teval, oracle_all, oracle_json);
        if (verify->parsed())
            return cmd_verify(verify_args, verify_seeds, no_tree_audits, check_trace_path,
                              check_trace_states);
        if (bench->parsed()) return cmd_bench(bench_out);
        return kExitPrecondition;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitPrecondition;
    } catch (const gametree::TieBreakingError& e) {
        std::cerr << "error: terminal eval is not tie-breaking: " << e.report.reason << "\n";
        return kExitPrecondition;
    } catch (const gametree::ParseError& e) {
        std::cerr << "error: parse failed at line " << e.line() << ", column " << e.column() << ": "
                  << e.what() << "\n";
        return kExitPrecondition;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
