#pragma once
// Core model for temperature-2 tile self-assembly on a bounded n x n surface:
// glues, tile types, configurations, and the attachment rules everything else
// (verification, model checking, Petri translation) is defined against.
//
// Conventions used throughout:
//   - coordinates: x grows east, y grows north, surface is {0..n-1}^2
//   - row-major order means (y, x) ascending: (0,0), (1,0), ..., (0,1), ...
//   - all types are immutable value types once built; sharing across threads
//     is safe because nothing here mutates shared state

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tascheck {

// ── errors ──────────────────────────────────────────────────────────────────

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfBounds : Error {
    using Error::Error;
};
struct OccupiedLocation : Error {
    using Error::Error;
};
struct StateBudgetExceeded : Error {
    using Error::Error;
};
struct SeedNotSingleton : Error {
    using Error::Error;
};
struct SurfaceTooSmall : Error {
    using Error::Error;
};
struct EmptySystem : Error {
    using Error::Error;
};
struct AtomOutOfRange : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};

// ── directions ──────────────────────────────────────────────────────────────

enum class Dir : uint8_t { N = 0, E = 1, S = 2, W = 3 };

constexpr std::array<Dir, 4> all_dirs{Dir::N, Dir::E, Dir::S, Dir::W};

constexpr int dx(Dir d) { return d == Dir::E ? 1 : d == Dir::W ? -1 : 0; }
constexpr int dy(Dir d) { return d == Dir::N ? 1 : d == Dir::S ? -1 : 0; }

/// Shared cap for explicit state-space exploration (transition system, Petri
/// token game); exceeding it raises StateBudgetExceeded.
constexpr size_t kDefaultStateBudget = 10'000'000;

constexpr Dir opposite(Dir d) {
    switch (d) {
    case Dir::N: return Dir::S;
    case Dir::E: return Dir::W;
    case Dir::S: return Dir::N;
    default: return Dir::E;
    }
}

inline const char* dir_name(Dir d) {
    switch (d) {
    case Dir::N: return "north";
    case Dir::E: return "east";
    case Dir::S: return "south";
    default: return "west";
    }
}

// ── coordinates ─────────────────────────────────────────────────────────────

struct Coord {
    int x = 0;
    int y = 0;

    friend bool operator==(const Coord&, const Coord&) = default;
    // row-major: y is the row index
    friend bool operator<(const Coord& a, const Coord& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

inline Coord step(Coord c, Dir d) { return {c.x + dx(d), c.y + dy(d)}; }

// ── glues ───────────────────────────────────────────────────────────────────

/// A glue is a label plus a strength in {0,1,2}; strength 0 is the null glue.
struct Glue {
    std::string label;
    int strength = 0;

    bool null() const { return strength == 0; }
    friend bool operator==(const Glue&, const Glue&) = default;
};

/// Which glue labels may interact. The default is the diagonal relation
/// (ISU-TAS convention): equal label and equal strength. An explicit relation
/// carries a symmetric set of label pairs and uses the min-strength rule.
struct GlueRelation {
    bool diagonal = true;
    std::set<std::pair<std::string, std::string>> pairs;  // kept symmetric

    void add_pair(const std::string& a, const std::string& b) {
        diagonal = false;
        pairs.emplace(a, b);
        pairs.emplace(b, a);
    }

    bool relates(const std::string& a, const std::string& b) const {
        return diagonal ? a == b : pairs.count({a, b}) > 0;
    }

    friend bool operator==(const GlueRelation&, const GlueRelation&) = default;
};

/// Strength with which two facing glues bind: 0 unless both are non-null and
/// related. Diagonal relation additionally requires equal strengths and yields
/// that common strength; an explicit relation yields min(a,b).
inline int interaction_strength(const Glue& a, const Glue& b, const GlueRelation& rel) {
    if (a.null() || b.null()) return 0;
    if (rel.diagonal) return (a.label == b.label && a.strength == b.strength) ? a.strength : 0;
    return rel.relates(a.label, b.label) ? std::min(a.strength, b.strength) : 0;
}

// ── tile types ──────────────────────────────────────────────────────────────

struct TileType {
    std::string name;
    std::array<Glue, 4> sides;  // indexed by Dir
    std::string display;        // optional display label

    const Glue& side(Dir d) const { return sides[static_cast<size_t>(d)]; }
    Glue& side(Dir d) { return sides[static_cast<size_t>(d)]; }

    friend bool operator==(const TileType&, const TileType&) = default;
};

// ── seed and system ─────────────────────────────────────────────────────────

/// Nonempty set of seeded cells, each holding a tile type index. Kept sorted
/// row-major; coordinates are already translated so the bounding box's
/// lower-left corner is (0,0).
struct SeedAssembly {
    std::vector<std::pair<Coord, int>> cells;

    bool singleton() const { return cells.size() == 1; }
    friend bool operator==(const SeedAssembly&, const SeedAssembly&) = default;
};

/// The 5-tuple (T, sigma, Sigma, tau, R). Tile order is significant: it is the
/// deterministic index space used by the Petri translation and the atom
/// numbering (atom index m = tile index + 1; m = 0 is the empty marker).
struct TileAssemblySystem {
    std::vector<TileType> tiles;
    GlueRelation relation;
    int temperature = 2;
    SeedAssembly seed;

    int tile_index(const std::string& name) const {
        for (size_t i = 0; i < tiles.size(); ++i)
            if (tiles[i].name == name) return static_cast<int>(i);
        return -1;
    }

    const TileType& tile(int idx) const { return tiles.at(static_cast<size_t>(idx)); }
    int tile_count() const { return static_cast<int>(tiles.size()); }

    /// Tile indices ordered by lexicographic tile name (frontier tie-break).
    std::vector<int> name_ordered_tiles() const {
        std::vector<int> order(tiles.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return tiles[size_t(a)].name < tiles[size_t(b)].name; });
        return order;
    }

    friend bool operator==(const TileAssemblySystem&, const TileAssemblySystem&) = default;
};

// ── configurations ──────────────────────────────────────────────────────────

/// Partial tiling of the n x n surface. Cells hold tile indices into the
/// owning system's tile list; empty() cells hold -1.
struct Configuration {
    static constexpr int16_t kEmpty = -1;

    int n = 0;
    std::vector<int16_t> cells;  // index y*n + x

    Configuration() = default;
    explicit Configuration(int surface) : n(surface), cells(size_t(surface) * size_t(surface), kEmpty) {
        if (surface <= 0) throw SurfaceTooSmall("surface size must be positive");
    }

    bool in_bounds(Coord c) const { return c.x >= 0 && c.x < n && c.y >= 0 && c.y < n; }
    size_t index(Coord c) const { return size_t(c.y) * size_t(n) + size_t(c.x); }

    int16_t at(Coord c) const { return cells[index(c)]; }
    bool occupied(Coord c) const { return at(c) != kEmpty; }
    bool empty_at(Coord c) const { return at(c) == kEmpty; }

    void place(Coord c, int tile) {
        if (!in_bounds(c)) throw OutOfBounds("placement outside surface");
        int16_t& cell = cells[index(c)];
        if (cell != kEmpty) throw OccupiedLocation("placement on occupied cell");
        cell = static_cast<int16_t>(tile);
    }

    void clear(Coord c) { cells[index(c)] = kEmpty; }

    int tile_count() const {
        return static_cast<int>(std::count_if(cells.begin(), cells.end(),
                                              [](int16_t v) { return v != kEmpty; }));
    }

    /// Occupied cells in row-major order.
    std::vector<Coord> occupied_cells() const {
        std::vector<Coord> out;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                if (cells[size_t(y) * size_t(n) + size_t(x)] != kEmpty) out.push_back({x, y});
        return out;
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
    size_t operator()(const Configuration& c) const {
        // FNV-1a over the cell bytes, seeded with n
        uint64_t h = 1469598103934665603ull ^ uint64_t(c.n);
        for (int16_t v : c.cells) {
            h ^= uint16_t(v);
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

/// Seed placed on an otherwise empty n x n surface.
inline Configuration seed_configuration(const TileAssemblySystem& sys, int n) {
    Configuration c(n);
    for (const auto& [loc, tile] : sys.seed.cells) {
        if (!c.in_bounds(loc))
            throw SurfaceTooSmall("seed does not fit on the requested surface");
        c.place(loc, tile);
    }
    return c;
}

// ── attachment rules ────────────────────────────────────────────────────────

/// Total binding strength tile `tile` would have at `loc`: sum of interactions
/// with the (up to 4) occupied neighbours' facing glues.
inline int binding_strength(const TileAssemblySystem& sys, const Configuration& c,
                            int tile, Coord loc) {
    if (!c.in_bounds(loc)) throw OutOfBounds("binding_strength outside surface");
    if (c.occupied(loc)) throw OccupiedLocation("binding_strength at occupied cell");
    const TileType& t = sys.tile(tile);
    int sum = 0;
    for (Dir d : all_dirs) {
        Coord nb = step(loc, d);
        if (!c.in_bounds(nb) || c.empty_at(nb)) continue;
        const TileType& other = sys.tile(c.at(nb));
        sum += interaction_strength(t.side(d), other.side(opposite(d)), sys.relation);
    }
    return sum;
}

/// True iff `loc` is an empty in-surface cell where `tile` binds with strength
/// at least the temperature. Out-of-surface locations yield false.
inline bool can_attach(const TileAssemblySystem& sys, const Configuration& c,
                       int tile, Coord loc) {
    if (!c.in_bounds(loc) || c.occupied(loc)) return false;
    return binding_strength(sys, c, tile, loc) >= sys.temperature;
}

/// All (location, tile) attachment candidates, ordered row-major by location
/// and lexicographically by tile name within a location.
inline std::vector<std::pair<Coord, int>> frontier(const TileAssemblySystem& sys,
                                                   const Configuration& c) {
    std::vector<int> order = sys.name_ordered_tiles();
    std::vector<std::pair<Coord, int>> out;
    for (int y = 0; y < c.n; ++y)
        for (int x = 0; x < c.n; ++x) {
            Coord loc{x, y};
            if (c.occupied(loc)) continue;
            // only cells adjacent to a tile can possibly bind
            bool adjacent = false;
            for (Dir d : all_dirs) {
                Coord nb = step(loc, d);
                if (c.in_bounds(nb) && c.occupied(nb)) {
                    adjacent = true;
                    break;
                }
            }
            if (!adjacent) continue;
            for (int t : order)
                if (can_attach(sys, c, t, loc)) out.emplace_back(loc, t);
        }
    return out;
}

/// Candidate tile types at one location, in tile-name order.
inline std::vector<int> candidates_at(const TileAssemblySystem& sys, const Configuration& c,
                                      Coord loc) {
    std::vector<int> out;
    for (int t : sys.name_ordered_tiles())
        if (can_attach(sys, c, t, loc)) out.push_back(t);
    return out;
}

/// One minimal way for a tile to reach the binding threshold: each entry
/// names a side and the neighbor tile type that must face it.
using BindingPattern = std::vector<std::pair<Dir, int>>;

/// All minimal cooperation patterns with which tile `m` reaches threshold 2:
/// a single strength-2 interaction, or two strength-1 interactions on
/// distinct sides. Any neighborhood that enables an attachment contains one
/// of these patterns, and every pattern enables it, so "some pattern present
/// among the neighbors of an empty in-bounds cell" is equivalent to
/// can_attach there. Deterministic order: sides N,E,S,W; tile index ascending.
inline std::vector<BindingPattern> binding_patterns(const TileAssemblySystem& sys, int m) {
    if (sys.temperature != 2)
        throw PreconditionError("binding patterns are defined for temperature 2");
    const TileType& t = sys.tile(m);
    std::vector<BindingPattern> out;
    auto strength_with = [&](Dir d, int u) {
        return interaction_strength(t.side(d), sys.tile(u).side(opposite(d)), sys.relation);
    };
    for (Dir d : all_dirs)
        for (int u = 0; u < sys.tile_count(); ++u)
            if (strength_with(d, u) >= 2) out.push_back({{d, u}});
    for (size_t a = 0; a < 4; ++a)
        for (size_t b = a + 1; b < 4; ++b)
            for (int u1 = 0; u1 < sys.tile_count(); ++u1) {
                if (strength_with(all_dirs[a], u1) != 1) continue;
                for (int u2 = 0; u2 < sys.tile_count(); ++u2)
                    if (strength_with(all_dirs[b], u2) == 1)
                        out.push_back({{all_dirs[a], u1}, {all_dirs[b], u2}});
            }
    return out;
}

/// Stability predicate: the configuration is closed under rebuilding from the
/// seed by single-tile threshold attachments (assemblies grown one tile at a
/// time from a stable seed are exactly the cut-stable ones at this strength
/// range). Seed tiles are exempt: they are given as a stable unit. If the
/// configuration does not contain the full seed, the rebuild is rooted at its
/// row-major-first tile instead.
inline bool is_stable(const TileAssemblySystem& sys, const Configuration& c) {
    std::vector<Coord> occ = c.occupied_cells();
    if (occ.empty()) return true;

    Configuration done(c.n);
    size_t placed = 0;

    bool seed_present = !sys.seed.cells.empty();
    for (const auto& [loc, tile] : sys.seed.cells)
        if (!c.in_bounds(loc) || c.at(loc) != tile) {
            seed_present = false;
            break;
        }
    if (seed_present) {
        for (const auto& [loc, tile] : sys.seed.cells) {
            done.place(loc, tile);
            ++placed;
        }
    } else {
        done.place(occ.front(), c.at(occ.front()));
        ++placed;
    }

    bool progress = true;
    while (progress && placed < occ.size()) {
        progress = false;
        for (Coord loc : occ) {
            if (done.occupied(loc)) continue;
            if (binding_strength(sys, done, c.at(loc), loc) >= sys.temperature) {
                done.place(loc, c.at(loc));
                ++placed;
                progress = true;
            }
        }
    }
    return placed == occ.size();
}

}  // namespace tascheck
