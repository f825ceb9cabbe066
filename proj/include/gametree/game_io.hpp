#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "gametree/game.hpp"

namespace gametree {

/// Syntax-level failure: malformed JSON, wrong field types, duplicate or
/// non-dense state ids, decimals finer than the 10^-6 grid. Semantic
/// problems (dangling edges, bad gains, cycles) are left to validate_game.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line, std::size_t column)
        : std::runtime_error(std::move(message)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Game file grammar (JSON):
///   {"players": n,
///    "states": [{"id": k, "player": p, "children": [...],
///                "gain": [g1..gn], "teval": [e1..en]}, ...]}
/// "children" may be omitted or empty (terminal); "player" is omitted for
/// terminals; "gain" appears on terminals; "teval" is optional per terminal.
GameGraph parse_game(std::string_view text);

std::string serialize_game(const GameGraph& g);

}  // namespace gametree
