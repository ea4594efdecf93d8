#pragma once
// Guarded-Petri-net reachability engine. A tile system on a bounded n×n
// surface becomes a net with one place per "location is empty" fact, one
// place per (tile type, location) fact, and one bond transition per
// (tile type, location) guarded by the minimal binding patterns of that tile
// type, with patterns that would reach off the surface dropped. Firing a bond
// consumes the empty token and produces the tile token, so the token game
// replays attachment exactly; the explorer here plays it from the guards
// alone, giving a third engine that is bisimilar to the explicit transition
// system without sharing its attachment code. The same net pretty-prints as a
// SMART model whose statesets count reachable and terminal assemblies.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace tascheck {

using PetriCount = boost::multiprecision::cpp_int;

/// One conjunction of token tests: every listed (tile, cell) must hold a
/// token for the disjunct to pass.
struct GuardDisjunct {
    std::vector<std::pair<int, Coord>> tokens;
};

/// The bond transition for one tile type at one location. An empty disjunct
/// list means the guard is never satisfiable on this surface (every binding
/// pattern of the tile type reaches off it).
struct BondTransition {
    int tile = -1;
    Coord loc;
    std::vector<GuardDisjunct> disjuncts;

    bool satisfiable() const { return !disjuncts.empty(); }
};

struct GuardedPetriNet {
    int n = 0;
    int tile_kinds = 0;
    std::vector<std::pair<Coord, int>> seed;   // initial tile tokens
    std::vector<BondTransition> transitions;   // indexed (k*n + x)*n + y

    size_t place_count() const { return size_t(n) * size_t(n) * size_t(1 + tile_kinds); }
    size_t transition_count() const { return transitions.size(); }

    const BondTransition& bond(int k, Coord loc) const {
        return transitions[size_t((k * n + loc.x) * n + loc.y)];
    }
};

/// Build the net for a system on an n-by-n surface. Guards come from the
/// minimal binding patterns of each tile type; a pattern whose neighbor falls
/// outside the surface is dropped at that location.
inline GuardedPetriNet translate(const TileAssemblySystem& sys, int n) {
    if (n < 1) throw PreconditionError("translate needs a surface of size >= 1");
    if (sys.tiles.empty()) throw EmptySystem("translate needs at least one tile type");
    GuardedPetriNet net;
    net.n = n;
    net.tile_kinds = sys.tile_count();
    net.seed = sys.seed.cells;

    auto in_surface = [n](Coord c) { return c.x >= 0 && c.x < n && c.y >= 0 && c.y < n; };
    for (int k = 0; k < sys.tile_count(); ++k) {
        auto patterns = binding_patterns(sys, k);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                BondTransition t;
                t.tile = k;
                t.loc = {x, y};
                for (const BindingPattern& p : patterns) {
                    GuardDisjunct d;
                    bool fits = true;
                    for (auto [dir, partner] : p) {
                        Coord nbr = step(t.loc, dir);
                        if (!in_surface(nbr)) {
                            fits = false;
                            break;
                        }
                        d.tokens.push_back({partner, nbr});
                    }
                    if (fits) t.disjuncts.push_back(std::move(d));
                }
                net.transitions.push_back(std::move(t));
            }
    }
    return net;
}

/// Evaluate one bond's guard against a marking (the Configuration doubles as
/// the marking: an occupied cell is a tile token, an unoccupied one is the
/// empty token).
inline bool guard_holds(const BondTransition& t, const Configuration& marking) {
    for (const GuardDisjunct& d : t.disjuncts) {
        bool all = true;
        for (auto [tile, cell] : d.tokens)
            if (!marking.occupied(cell) || marking.at(cell) != tile) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

/// Bond transitions enabled at a marking: the location still holds its empty
/// token and the guard passes.
inline std::vector<const BondTransition*> enabled_bonds(const GuardedPetriNet& net,
                                                        const Configuration& marking) {
    std::vector<const BondTransition*> out;
    for (const BondTransition& t : net.transitions) {
        if (!t.satisfiable() || marking.occupied(t.loc)) continue;
        if (guard_holds(t, marking)) out.push_back(&t);
    }
    return out;
}

struct PetriExploreResult {
    PetriCount states = 0;
    PetriCount edges = 0;
    PetriCount terminal_states = 0;
};

/// Breadth-first token game over the net, counting reachable markings, bond
/// firings, and dead markings. Runs on the guards alone.
inline PetriExploreResult explore(const GuardedPetriNet& net,
                                  size_t state_budget = kDefaultStateBudget) {
    Configuration initial(net.n);
    for (auto [loc, tile] : net.seed) initial.place(loc, tile);

    std::set<std::vector<int16_t>> seen;
    std::vector<Configuration> queue;
    seen.insert(initial.cells);
    queue.push_back(initial);

    PetriExploreResult result;
    for (size_t head = 0; head < queue.size(); ++head) {
        Configuration marking = queue[head];
        auto fired = enabled_bonds(net, marking);
        result.edges += PetriCount(fired.size());
        if (fired.empty()) ++result.terminal_states;
        for (const BondTransition* t : fired) {
            Configuration next = marking;
            next.place(t->loc, t->tile);
            if (seen.insert(next.cells).second) {
                if (queue.size() >= state_budget)
                    throw StateBudgetExceeded("state budget of " + std::to_string(state_budget) +
                                              " exceeded");
                queue.push_back(std::move(next));
            }
        }
    }
    result.states = PetriCount(queue.size());
    return result;
}

// ── SMART model export ──────────────────────────────────────────────────────

namespace detail {

/// A loop coordinate in the emitted model: either the symbolic loop variable
/// (plus offset) or a literal index.
struct SmartIndex {
    bool symbolic = false;
    std::string base;
    int value = 0;

    std::string offset(int d) const {
        if (!symbolic) return std::to_string(value + d);
        if (d == 0) return base;
        return base + (d > 0 ? "+" : "-") + std::to_string(d > 0 ? d : -d);
    }
};

inline std::string smart_token(int tile, const SmartIndex& i, const SmartIndex& j, Dir d) {
    return "(tk(tile[" + std::to_string(tile) + "][" + i.offset(dx(d)) + "][" + j.offset(dy(d)) +
           "]) > 0)";
}

/// Render one guard command for tile k at the location class described by the
/// two indices. Patterns whose neighbors leave the surface are dropped; if
/// none remain the guard is pinned unsatisfiable (the empty place never holds
/// two tokens).
inline std::string smart_guard(const std::vector<BindingPattern>& patterns, int k,
                               const SmartIndex& i, const SmartIndex& j, int n) {
    auto neighbor_fits = [&](Dir d) {
        // symbolic indices range over {1..n-2}, so their neighbors always fit
        if (d == Dir::N || d == Dir::S) {
            if (j.symbolic) return true;
            int v = j.value + dy(d);
            return v >= 0 && v < n;
        }
        if (i.symbolic) return true;
        int v = i.value + dx(d);
        return v >= 0 && v < n;
    };
    std::string expr;
    for (const BindingPattern& p : patterns) {
        bool fits = true;
        for (auto [dir, partner] : p) {
            (void)partner;
            if (!neighbor_fits(dir)) {
                fits = false;
                break;
            }
        }
        if (!fits) continue;
        std::string disjunct;
        if (p.size() == 1) {
            disjunct = smart_token(p[0].second, i, j, p[0].first);
        } else {
            disjunct = "(" + smart_token(p[0].second, i, j, p[0].first) + "&" +
                       smart_token(p[1].second, i, j, p[1].first) + ")";
        }
        if (!expr.empty()) expr += "|";
        expr += disjunct;
    }
    if (expr.empty()) expr = "tk(empty[" + i.offset(0) + "][" + j.offset(0) + "]) > 1";
    return "guard(bond[" + std::to_string(k) + "][" + i.offset(0) + "][" + j.offset(0) + "]:" +
           expr + ");";
}

}  // namespace detail

/// Pretty-print the system as a complete SMART model: places and bond
/// transitions for every location, the seed and empty-place initialization,
/// arcs, guards (an interior loop plus explicit edge and corner sections),
/// and the statesets that count reachable and terminal assemblies.
inline std::string export_smart(const TileAssemblySystem& sys, int n,
                                const std::string& model_name) {
    if (n < 1) throw PreconditionError("export_smart needs a surface of size >= 1");
    if (sys.tiles.empty()) throw EmptySystem("export_smart needs at least one tile type");
    if (sys.seed.cells.empty()) throw EmptySystem("export_smart needs a seed");

    const int kinds = sys.tile_count();
    std::vector<std::vector<BindingPattern>> patterns;
    patterns.reserve(size_t(kinds));
    for (int k = 0; k < kinds; ++k) patterns.push_back(binding_patterns(sys, k));

    const std::string all = "{0.." + std::to_string(n - 1) + "}";
    const std::string inner = "{1.." + std::to_string(n - 2) + "}";
    const std::string kr = "{0.." + std::to_string(kinds - 1) + "}";
    std::string out;
    out += "pn " + model_name + " := {\n\n";

    out += "// the locations of the Petri net correspond to the presence (or absence) of a tile "
           "from a specific location\n";
    out += "// first the possibility that locations are empty\n";
    out += "for (int i in " + all + ") {\n  for (int j in " + all + ") {\n"
           "    place empty[i][j];\n}}\n\n";
    out += "// now the possibility that locations have tiles\n";
    out += "for (int k in " + kr + ") {\n  for (int i in " + all + ") {\n    for (int j in " +
           all + ") {\n      place tile[k][i][j];\n}}}\n\n";
    out += "// the transitions of the Petri net correspond to all potential bonds that may be "
           "formed\n";
    out += "for (int k in " + kr + ") {\n  for (int i in " + all + ") {\n    for (int j in " +
           all + ") {\n      trans bond[k][i][j];\n}}}\n\n";

    out += "// initialization command translating the tiles of the seed assembly\n";
    out += "// to an initial configuration of tokens in the Petri net\n";
    out += "init(";
    for (size_t s = 0; s < sys.seed.cells.size(); ++s) {
        auto [loc, tile] = sys.seed.cells[s];
        if (s) out += ", ";
        out += "tile[" + std::to_string(tile) + "][" + std::to_string(loc.x) + "][" +
               std::to_string(loc.y) + "]:1";
    }
    out += ");\n";
    {
        auto seeded = [&](int x, int y) {
            for (auto [loc, tile] : sys.seed.cells) {
                (void)tile;
                if (loc == Coord{x, y}) return true;
            }
            return false;
        };
        std::string line;
        bool any = false;
        for (int i = 0; i < n; ++i) {
            std::string row;
            for (int j = 0; j < n; ++j) {
                if (seeded(i, j)) continue;
                if (!row.empty()) row += ", ";
                row += "empty[" + std::to_string(i) + "][" + std::to_string(j) + "]:1";
            }
            if (row.empty()) continue;
            if (!any) {
                line = "init(" + row;
                any = true;
            } else {
                line += ",\n     " + row;
            }
        }
        if (any) out += line + ");\n";
    }
    out += "\n";

    out += "// this section produces the arcs/transitions for the Petri net\n";
    out += "// first produce (unguarded) transitions from empty location (x,y) to each possible "
           "tile at (x,y)\n";
    out += "for (int k in " + kr + ") {\n  for (int i in " + all + ") {\n    for (int j in " +
           all + ") {\n      arcs(empty[i][j]:bond[k][i][j], bond[k][i][j]:tile[k][i][j]);\n"
           "}}}\n";

    out += "// now produce guards that activate the bond transition only if the binding rule is "
           "true\n";
    using detail::SmartIndex;
    auto sym = [](const char* b) { return SmartIndex{true, b, 0}; };
    auto lit = [](int v) { return SmartIndex{false, "", v}; };
    if (n > 2) {
        out += "// first a loop that takes care of all non-boundary conditions\n";
        out += "for (int i in " + inner + ") {\n  for (int j in " + inner + ") {\n";
        for (int k = 0; k < kinds; ++k)
            out += "    " + detail::smart_guard(patterns[size_t(k)], k, sym("i"), sym("j"), n) +
                   "\n";
        out += "}}\n";
        out += "// then the edges of the surface, dropping bonds that would reach off it\n";
        for (int x : {0, n - 1}) {
            out += "for (int j in " + inner + ") {\n";
            for (int k = 0; k < kinds; ++k)
                out += "  " + detail::smart_guard(patterns[size_t(k)], k, lit(x), sym("j"), n) +
                       "\n";
            out += "}\n";
        }
        for (int y : {0, n - 1}) {
            out += "for (int i in " + inner + ") {\n";
            for (int k = 0; k < kinds; ++k)
                out += "  " + detail::smart_guard(patterns[size_t(k)], k, sym("i"), lit(y), n) +
                       "\n";
            out += "}\n";
        }
    }
    out += "// finally the corners\n";
    for (int x : {0, n - 1})
        for (int y : {0, n - 1}) {
            if (n == 1 && (x != 0 || y != 0)) continue;
            for (int k = 0; k < kinds; ++k)
                out += detail::smart_guard(patterns[size_t(k)], k, lit(x), lit(y), n) + "\n";
        }
    out += "\n";

    out += "// the following commands generate statesets and related expressions for use by the "
           "model checking program\n";
    out += "bigint numStates := card(reachable);\n";
    out += "stateset nonTerminalStates := EX(potential(true));\n";
    out += "stateset terminalStates := reachable \\ nonTerminalStates;\n";
    out += "bigint numTerminalStates := card(terminalStates);\n";
    out += "};\n\n";
    out += "// this is the model checking program based on the Petri net defined above\n";
    out += "print(\"Number of reachable states for this tile assembly system: \", " + model_name +
           ".numStates);\n";
    out += "print(\"Number of terminal assemblies reachable from the seed assembly: \", " +
           model_name + ".numTerminalStates);\n";
    return out;
}

}  // namespace tascheck
