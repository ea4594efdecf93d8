#pragma once
// Explicit-state transition system induced by a tile assembly system on a
// bounded n×n surface: states are reachable configurations, edges are single
// tile attachments. Built breadth-first with hashing so each configuration is
// stored exactly once; state 0 is the seed configuration.

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"

namespace tascheck {

struct AttachmentStep {
    Coord loc;
    int tile = 0;

    friend bool operator==(const AttachmentStep&, const AttachmentStep&) = default;
};

struct TransitionEdge {
    int target = 0;
    AttachmentStep step;
};

struct TransitionSystem {
    int n = 0;
    std::vector<Configuration> states;          // states[0] is the seed configuration
    std::vector<std::vector<TransitionEdge>> edges;

    size_t edge_count() const {
        size_t total = 0;
        for (const auto& out : edges) total += out.size();
        return total;
    }

    std::vector<int> terminal_states() const {
        std::vector<int> out;
        for (size_t i = 0; i < edges.size(); ++i)
            if (edges[i].empty()) out.push_back(int(i));
        return out;
    }
};

inline TransitionSystem build_transition_system(const TileAssemblySystem& sys, int n,
                                                size_t state_budget = kDefaultStateBudget) {
    TransitionSystem ts;
    ts.n = n;
    std::unordered_map<Configuration, int, ConfigurationHash> index;

    Configuration init = seed_configuration(sys, n);
    index.emplace(init, 0);
    ts.states.push_back(std::move(init));
    ts.edges.emplace_back();

    for (size_t head = 0; head < ts.states.size(); ++head) {
        // states may reallocate while we grow, so copy the frontier source
        Configuration cur = ts.states[head];
        for (const auto& [loc, tile] : frontier(sys, cur)) {
            Configuration next = cur;
            next.place(loc, tile);
            auto [it, fresh] = index.emplace(std::move(next), int(ts.states.size()));
            if (fresh) {
                if (ts.states.size() >= state_budget)
                    throw StateBudgetExceeded("state budget of " +
                                              std::to_string(state_budget) + " exceeded");
                ts.states.push_back(it->first);
                ts.edges.emplace_back();
            }
            ts.edges[head].push_back({it->second, {loc, tile}});
        }
    }
    return ts;
}

/// True when no tile could ever attach outside the n×n surface. Every lattice
/// cell adjacent to the surface touches exactly one surface cell, so the only
/// way out is a single strength-2 glue facing north from the top row or east
/// from the right column that some tile type's opposite face matches. When
/// growth escapes, `escape` (if given) receives the offending surface cell.
inline bool is_terminal_beyond_surface(const TileAssemblySystem& sys, const Configuration& c,
                                       Coord* escape = nullptr) {
    auto matched = [&](const Glue& g, Dir opposite_side) {
        if (g.strength != 2) return false;
        for (const auto& t : sys.tiles)
            if (interaction_strength(g, t.side(opposite_side), sys.relation) >= 2) return true;
        return false;
    };
    auto offends = [&](Coord loc, Dir facing) {
        int tile = c.at(loc);
        if (tile < 0) return false;
        return matched(sys.tile(tile).side(facing), opposite(facing));
    };
    for (int x = 0; x < c.n; ++x)
        if (offends({x, c.n - 1}, Dir::N)) {
            if (escape) *escape = {x, c.n - 1};
            return false;
        }
    for (int y = 0; y < c.n; ++y)
        if (offends({c.n - 1, y}, Dir::E)) {
            if (escape) *escape = {c.n - 1, y};
            return false;
        }
    return true;
}

/// One random maximal assembly sequence from the seed, reproducible from the
/// RNG seed: draw uniformly among frontier attachments until none remain.
inline std::vector<AttachmentStep> random_assembly_sequence(const TileAssemblySystem& sys, int n,
                                                            uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    Configuration c = seed_configuration(sys, n);
    std::vector<AttachmentStep> steps;
    for (;;) {
        auto fr = frontier(sys, c);
        if (fr.empty()) break;
        std::uniform_int_distribution<size_t> pick(0, fr.size() - 1);
        auto [loc, tile] = fr[pick(rng)];
        c.place(loc, tile);
        steps.push_back({loc, tile});
    }
    return steps;
}

/// Re-run an attachment sequence from the seed, validating every step.
inline Configuration replay(const TileAssemblySystem& sys, int n,
                            const std::vector<AttachmentStep>& steps) {
    Configuration c = seed_configuration(sys, n);
    for (size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        if (!can_attach(sys, c, s.tile, s.loc))
            throw PreconditionError("step " + std::to_string(i) + " is not a legal attachment");
        c.place(s.loc, s.tile);
    }
    return c;
}

/// Deterministic edge-list dump, one line per edge.
inline std::string export_edge_list(const TileAssemblySystem& sys, const TransitionSystem& ts) {
    std::ostringstream out;
    out << "# states: " << ts.states.size() << "\n";
    out << "# edges: " << ts.edge_count() << "\n";
    for (size_t u = 0; u < ts.edges.size(); ++u)
        for (const auto& e : ts.edges[u])
            out << u << " -> " << e.target << " : " << sys.tile(e.step.tile).name << " @ ("
                << e.step.loc.x << "," << e.step.loc.y << ")\n";
    return out.str();
}

}  // namespace tascheck
