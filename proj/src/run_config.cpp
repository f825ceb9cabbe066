#include "gametree/run_config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gametree {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json parse_json_file(const std::string& path) {
    auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) throw std::invalid_argument("invalid JSON in " + path);
    return doc;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad " + what + ": " + text);
    }
}

std::vector<FixedPoint> fixed_row(const nlohmann::json& val, const std::string& what) {
    std::vector<FixedPoint> row;
    for (const auto& x : val) {
        auto fp = FixedPoint::parse(x.dump());
        if (!fp)
            throw std::invalid_argument(what + " value not on the 10^-6 grid: " + x.dump());
        row.push_back(*fp);
    }
    return row;
}

}  // namespace

EvalFn eval_from_spec(const std::string& spec) {
    if (spec == "zero") return EvalFn::zero();
    if (spec.rfind("hashed:", 0) == 0) return EvalFn::hashed(parse_u64(spec.substr(7), "seed"));
    if (spec.rfind("table:", 0) == 0) {
        auto doc = parse_json_file(spec.substr(6));
        if (!doc.is_object()) throw std::invalid_argument("eval table must be a JSON object");
        std::map<StateId, std::vector<FixedPoint>> table;
        for (const auto& [key, val] : doc.items())
            table[static_cast<StateId>(parse_u64(key, "eval table id"))] = fixed_row(val, "eval table");
        return EvalFn::table(std::move(table));
    }
    throw std::invalid_argument("unknown eval spec: " + spec +
                                " (want zero | hashed:SEED | table:PATH)");
}

TerminalEval teval_from_spec(const GameGraph& g, const std::string& spec) {
    if (spec == "auto")
        return g.has_teval() ? terminal_eval_from_game(g) : terminal_eval_from_gains(g);
    if (spec == "gains") return terminal_eval_from_gains(g);
    if (spec.rfind("tiebreak:", 0) == 0) {
        auto eps = FixedPoint::parse(spec.substr(9));
        if (!eps)
            throw std::invalid_argument("tiebreak epsilon not on the 10^-6 grid: " +
                                        spec.substr(9));
        return make_tie_breaking_eval(g, *eps);
    }
    if (spec.rfind("table:", 0) == 0) {
        auto doc = parse_json_file(spec.substr(6));
        if (!doc.is_object()) throw std::invalid_argument("teval table must be a JSON object");
        TerminalEval ft;
        ft.values.resize(g.num_states());
        for (const auto& [key, val] : doc.items()) {
            auto s = static_cast<StateId>(parse_u64(key, "teval table id"));
            if (s >= g.num_states())
                throw std::invalid_argument("teval table id out of range: " + key);
            auto row = fixed_row(val, "teval table");
            if (row.size() != static_cast<std::size_t>(g.num_players))
                throw std::invalid_argument("teval table row needs one component per player: " +
                                            key);
            ft.values[s] = std::move(row);
        }
        if (!ft.covers(g))
            throw std::invalid_argument("teval table does not cover every terminal");
        return ft;
    }
    throw std::invalid_argument("unknown teval spec: " + spec +
                                " (want auto | gains | tiebreak:EPS | table:PATH)");
}

}  // namespace gametree
