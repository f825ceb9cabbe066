#pragma once

#include <cstdint>

#include "gametree/game.hpp"

namespace gametree {

struct GenParams {
    int num_players = 2;
    StateId num_states = 20;
    int max_children = 3;
    double dag_density = 0.0;  // fraction of extra shared-descendant edges
    double draw_rate = 0.0;    // probability of a 0 gain component
};

/// Deterministic random game: same (seed, params) gives an identical graph
/// on every platform. Edges always point from lower to higher id, every
/// state is reachable from state 0, out-degrees respect max_children, and
/// dag_density controls how many extra transposition edges are added on
/// top of the random spanning tree. Two-player gains are zero-sum.
/// Throws std::invalid_argument on out-of-range parameters.
GameGraph generate_random_game(std::uint64_t seed, const GenParams& params);

/// splitmix64 mix step; shared by the generator and the hashed evaluator
/// so both are reproducible by construction.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Minimal deterministic RNG (splitmix64 stream).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform integer in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace gametree
