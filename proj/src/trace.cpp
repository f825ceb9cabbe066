#include "gametree/trace.hpp"

#include <json.hpp>

#include <sstream>

namespace gametree {

std::string trace_json_line(const IterationTrace& t, const char* variant) {
    nlohmann::ordered_json j;
    j["iter"] = t.iter;
    j["added"] = t.added;
    j["flips"] = t.flips;
    j["path"] = t.path;
    if (variant) j["variant"] = variant;
    return j.dump();
}

TraceCheckResult check_trace_lines(const std::string& text, StateId num_states) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::int64_t prev_iter = 0;
    std::vector<bool> added(num_states, false), flipped(num_states, false);

    auto bad = [&](const std::string& msg) {
        return TraceCheckResult{false, "line " + std::to_string(lineno) + ": " + msg};
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("iter") || !j.contains("added") ||
            !j.contains("flips") || !j.contains("path"))
            return bad("malformed trace record");
        if (!j["iter"].is_number_integer() || !j["added"].is_array() || !j["flips"].is_array() ||
            !j["path"].is_array())
            return bad("malformed trace record");

        auto iter = j["iter"].get<std::int64_t>();
        if (iter <= prev_iter) return bad("iteration numbers must strictly increase");
        prev_iter = iter;

        bool progress = false;
        for (const auto& v : j["added"]) {
            if (!v.is_number_integer()) return bad("added entry must be a state id");
            auto s = v.get<std::int64_t>();
            if (s < 0 || s >= static_cast<std::int64_t>(num_states)) return bad("added id out of range");
            if (added[static_cast<std::size_t>(s)])
                return bad("state " + std::to_string(s) + " added twice");
            added[static_cast<std::size_t>(s)] = true;
            progress = true;
        }
        for (const auto& v : j["flips"]) {
            if (!v.is_number_integer()) return bad("flips entry must be a state id");
            auto s = v.get<std::int64_t>();
            if (s < 0 || s >= static_cast<std::int64_t>(num_states)) return bad("flip id out of range");
            if (flipped[static_cast<std::size_t>(s)])
                return bad("state " + std::to_string(s) + " flipped twice");
            flipped[static_cast<std::size_t>(s)] = true;
            progress = true;
        }
        if (!progress) return bad("iteration made no progress (nothing added or flipped)");
    }
    if (lineno == 0) return {false, "empty trace"};
    return {};
}

}  // namespace gametree
