#include "gametree/game_io.hpp"

#include <json.hpp>

#include <utility>

namespace gametree {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] void fail(std::string_view text, std::size_t byte, const std::string& msg) {
    auto [line, col] = line_col(text, byte);
    throw ParseError(msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ")",
                     line, col);
}

[[noreturn]] void fail(std::string_view text, const std::string& msg) { fail(text, 0, msg); }

FixedPoint read_fixed(std::string_view text, const json& v, const char* what) {
    if (v.is_number_integer()) {
        auto units = v.get<std::int64_t>();
        if (units > 9'000'000'000'000LL || units < -9'000'000'000'000LL)
            fail(text, std::string(what) + " out of range");
        return FixedPoint::from_units(units);
    }
    if (v.is_number_float()) {
        auto fx = FixedPoint::from_double_exact(v.get<double>());
        if (!fx) fail(text, std::string(what) + " has more than 6 fractional digits");
        return *fx;
    }
    fail(text, std::string(what) + " must be a number");
}

std::int64_t read_int(std::string_view text, const json& v, const char* what) {
    if (!v.is_number_integer()) fail(text, std::string(what) + " must be an integer");
    return v.get<std::int64_t>();
}

}  // namespace

GameGraph parse_game(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        fail(text, byte, "invalid JSON: " + std::string(e.what()));
    }

    if (!doc.is_object()) fail(text, "top level must be an object");
    if (!doc.contains("players")) fail(text, "missing \"players\"");
    if (!doc.contains("states")) fail(text, "missing \"states\"");
    for (const auto& [key, _] : doc.items())
        if (key != "players" && key != "states") fail(text, "unknown top-level key \"" + key + "\"");

    std::int64_t players = read_int(text, doc["players"], "\"players\"");
    if (players < 1 || players > 64) fail(text, "\"players\" out of range");

    const json& states = doc["states"];
    if (!states.is_array()) fail(text, "\"states\" must be an array");

    GameGraph g;
    g.num_players = static_cast<int>(players);
    g.states.resize(states.size());
    std::vector<bool> seen(states.size(), false);

    for (const json& entry : states) {
        if (!entry.is_object()) fail(text, "state entry must be an object");
        if (!entry.contains("id")) fail(text, "state entry missing \"id\"");
        std::int64_t id = read_int(text, entry["id"], "\"id\"");
        if (id < 0) fail(text, "negative state id");
        if (static_cast<std::size_t>(id) >= states.size())
            fail(text, "state id " + std::to_string(id) + " out of range (ids must be dense)");
        if (seen[static_cast<std::size_t>(id)])
            fail(text, "duplicate state id " + std::to_string(id));
        seen[static_cast<std::size_t>(id)] = true;

        StateRecord& st = g.states[static_cast<std::size_t>(id)];
        for (const auto& [key, _] : entry.items())
            if (key != "id" && key != "player" && key != "children" && key != "gain" &&
                key != "teval")
                fail(text, "unknown state key \"" + key + "\"");

        if (entry.contains("children")) {
            const json& ch = entry["children"];
            if (!ch.is_array()) fail(text, "\"children\" must be an array");
            for (const json& c : ch) {
                std::int64_t cid = read_int(text, c, "child id");
                if (cid < 0 || cid > 0xffffffffLL) fail(text, "child id out of range");
                st.children.push_back(static_cast<StateId>(cid));
            }
        }
        if (st.is_terminal()) {
            st.player = 1;  // canonical; the field is ignored for terminals
        } else if (entry.contains("player")) {
            std::int64_t p = read_int(text, entry["player"], "\"player\"");
            if (p < 1 || p > 64) fail(text, "\"player\" out of range");
            st.player = static_cast<int>(p);
        }
        if (entry.contains("gain")) {
            const json& gv = entry["gain"];
            if (!gv.is_array()) fail(text, "\"gain\" must be an array");
            for (const json& c : gv) {
                std::int64_t v = read_int(text, c, "gain component");
                if (v < -127 || v > 127) fail(text, "gain component out of range");
                st.gain.push_back(static_cast<std::int8_t>(v));
            }
        }
        if (entry.contains("teval")) {
            const json& tv = entry["teval"];
            if (!tv.is_array()) fail(text, "\"teval\" must be an array");
            std::vector<FixedPoint> vals;
            for (const json& c : tv) vals.push_back(read_fixed(text, c, "teval component"));
            st.teval = std::move(vals);
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) fail(text, "missing state id " + std::to_string(i));
    return g;
}

std::string serialize_game(const GameGraph& g) {
    ordered doc;
    doc["players"] = g.num_players;
    doc["states"] = ordered::array();
    for (StateId s = 0; s < g.num_states(); ++s) {
        const StateRecord& st = g.states[s];
        ordered entry;
        entry["id"] = s;
        if (!st.is_terminal()) {
            entry["player"] = st.player;
            entry["children"] = st.children;
        }
        if (!st.gain.empty()) {
            std::vector<int> gains(st.gain.begin(), st.gain.end());
            entry["gain"] = gains;
        }
        if (st.teval) {
            ordered arr = ordered::array();
            for (FixedPoint v : *st.teval) arr.push_back(v.to_double());
            entry["teval"] = arr;
        }
        doc["states"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

}  // namespace gametree
