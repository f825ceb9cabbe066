#pragma once

#include <string>

#include "gametree/eval.hpp"
#include "gametree/game.hpp"

// Textual run configuration shared by the command line tool and the python
// bindings. All errors are std::invalid_argument with a usable message.

namespace gametree {

/// "zero" | "hashed:SEED" | "table:PATH". The table file is a JSON object
/// mapping state ids to per-player value arrays on the 10^-6 grid.
EvalFn eval_from_spec(const std::string& spec);

/// "auto" (embedded terminal evals if the game has them, else gains) |
/// "gains" | "tiebreak:EPS" | "table:PATH". The table file is a JSON object
/// mapping terminal ids to per-player arrays and must cover every terminal.
TerminalEval teval_from_spec(const GameGraph& g, const std::string& spec);

}  // namespace gametree
