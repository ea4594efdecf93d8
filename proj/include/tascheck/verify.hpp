#pragma once
// Partial-order-reduced verifier: decides whether a tile system grows a
// unique terminal assembly on a bounded n×n surface in rectilinear form,
// evaluating exactly n²+n-1 configurations on clean systems instead of the
// exponential reachable set. The schedule fixes one representative
// interleaving — seed, then column/row arms, then diagonal regions with four
// probe configurations each, with repeat-until-stable drains of the far
// interior between regions — and justifies it by locality: attachment of a
// tile depends only on its four neighbors, so independent placements commute.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "transition.hpp"

namespace tascheck {

enum class Verdict {
    UniqueTerminal,
    NonUniqueTerminal,
    NotRectilinear,
    NotLocallyDeterministic,
};

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::UniqueTerminal: return "UniqueTerminal";
        case Verdict::NonUniqueTerminal: return "NonUniqueTerminal";
        case Verdict::NotRectilinear: return "NotRectilinear";
        case Verdict::NotLocallyDeterministic: return "NotLocallyDeterministic";
    }
    return "?";
}

/// A replayable assembly sequence from the seed demonstrating a finding.
struct AssemblyWitness {
    std::string description;
    std::vector<AttachmentStep> steps;
};

struct VerifyOptions {
    bool strict_paper_rectilinearity = false;  // west-facing exposure rule
    bool local_determinism = true;             // run the online ld check
    bool reencode_multi_tile_seed = false;     // else SeedNotSingleton
};

struct VerificationReport {
    Verdict verdict = Verdict::UniqueTerminal;
    int surface = 0;
    size_t configurations_evaluated = 0;
    std::vector<AssemblyWitness> witnesses;
    std::optional<Configuration> terminal;  // present for UniqueTerminal
    std::optional<Coord> location;          // failing cell, if any
    std::string detail;
};

// ── rectilinearity rules ────────────────────────────────────────────────────

struct RectViolation {
    Coord loc;
    std::string reason;
};

namespace detail {

/// Exposure rules for the tile at `loc` (rules (b) and (c)): a strength-2
/// glue facing north anywhere off the left column, or facing east (default)
/// respectively west (strict mode) anywhere off the bottom row, with the
/// facing cell empty or beyond the surface, offers growth fuel that no
/// rectilinear-form assembly presents. Judged at placement time.
inline std::optional<RectViolation> exposure_violation(const TileAssemblySystem& sys,
                                                       const Configuration& c, Coord loc,
                                                       bool strict_paper) {
    const TileType& t = sys.tile(c.at(loc));
    auto exposed = [&](Dir d) {
        if (t.side(d).strength != 2) return false;
        Coord facing = step(loc, d);
        return !c.in_bounds(facing) || !c.occupied(facing);
    };
    if (loc.x > 0 && exposed(Dir::N))
        return RectViolation{loc, "tile " + t.name + " at (" + std::to_string(loc.x) + "," +
                                      std::to_string(loc.y) +
                                      ") exposes a strength-2 north glue off the left column"};
    Dir lateral = strict_paper ? Dir::W : Dir::E;
    if (loc.y > 0 && exposed(lateral))
        return RectViolation{loc, "tile " + t.name + " at (" + std::to_string(loc.x) + "," +
                                      std::to_string(loc.y) + ") exposes a strength-2 " +
                                      (strict_paper ? "west" : "east") +
                                      " glue off the bottom row"};
    return std::nullopt;
}

}  // namespace detail

/// Check a placement (already applied to `c`) against the rectilinear-form
/// rules: (a) the tile must not bind through its own north or east face, and
/// (b)/(c) it must not expose runaway strength-2 glues (see
/// exposure_violation). Returns the violation, if any.
inline std::optional<RectViolation> rectilinearity_check(const TileAssemblySystem& sys,
                                                         const Configuration& c,
                                                         const AttachmentStep& placed,
                                                         bool strict_paper = false) {
    const TileType& t = sys.tile(placed.tile);
    for (Dir d : {Dir::N, Dir::E}) {
        Coord nbr = step(placed.loc, d);
        if (!c.in_bounds(nbr) || !c.occupied(nbr)) continue;
        const TileType& other = sys.tile(c.at(nbr));
        if (interaction_strength(t.side(d), other.side(opposite(d)), sys.relation) > 0)
            return RectViolation{placed.loc,
                                 "tile " + t.name + " binds through its own " +
                                     (d == Dir::N ? "north" : "east") + " face at (" +
                                     std::to_string(placed.loc.x) + "," +
                                     std::to_string(placed.loc.y) + ")"};
    }
    return detail::exposure_violation(sys, c, placed.loc, strict_paper);
}

// ── online local determinism ────────────────────────────────────────────────

struct LocalDeterminismResult {
    bool ok = true;
    std::string reason;
    std::vector<int> competitors;  // competing tile indices, if any
};

/// Check one prospective attachment for local determinism: the binding
/// strength must be exactly the temperature (over-binding means the tile
/// could also have attached earlier in some order, losing determinism of the
/// attachment event), and no other tile type may be attachable at the same
/// location. Pass the already-enumerated candidate list when the caller has
/// one, so the check adds no second enumeration.
inline LocalDeterminismResult local_determinism_online(
    const TileAssemblySystem& sys, const Configuration& c, const AttachmentStep& step,
    const std::vector<int>* precomputed_candidates = nullptr) {
    LocalDeterminismResult r;
    int strength = binding_strength(sys, c, step.tile, step.loc);
    if (strength != sys.temperature) {
        r.ok = false;
        r.reason = "tile " + sys.tile(step.tile).name + " binds with strength " +
                   std::to_string(strength) + " at (" + std::to_string(step.loc.x) + "," +
                   std::to_string(step.loc.y) + "), not exactly " +
                   std::to_string(sys.temperature);
        return r;
    }
    std::vector<int> local;
    const std::vector<int>& cands =
        precomputed_candidates ? *precomputed_candidates : (local = candidates_at(sys, c, step.loc));
    for (int t : cands)
        if (t != step.tile) r.competitors.push_back(t);
    if (!r.competitors.empty()) {
        r.ok = false;
        r.reason = "tile " + sys.tile(step.tile).name + " competes with " +
                   sys.tile(r.competitors.front()).name + " at (" + std::to_string(step.loc.x) +
                   "," + std::to_string(step.loc.y) + ")";
    }
    return r;
}

// ── multi-tile seed re-encoding ─────────────────────────────────────────────

/// Rewrite a connected multi-tile seed as a singleton: each seed cell becomes
/// a fresh tile type, chained along a spanning tree (parent preference south,
/// west, north, east) with unique strength-2 glue pairs; faces between seed
/// cells that are not tree edges are nulled (removing internal over-binding),
/// outward faces keep the original glues. The root is the row-major first
/// cell. Seeds whose tree needs north/east parents, or whose fresh glues end
/// up exposed off the boundary arms, are honestly flagged by the verifier.
inline TileAssemblySystem reencode_seed(const TileAssemblySystem& sys) {
    if (sys.seed.singleton()) return sys;
    if (sys.seed.cells.empty()) throw PreconditionError("seed is empty");

    TileAssemblySystem out = sys;
    std::vector<std::pair<Coord, int>> cells = sys.seed.cells;
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto find_cell = [&](Coord loc) -> int {
        for (size_t i = 0; i < cells.size(); ++i)
            if (cells[i].first == loc) return int(i);
        return -1;
    };

    // spanning tree: parent[i] = (cell index, direction from child to parent)
    std::vector<std::optional<std::pair<int, Dir>>> parent(cells.size());
    std::vector<char> inside(cells.size(), 0);
    inside[0] = 1;
    size_t attached = 1;
    bool progress = true;
    const Dir preference[4] = {Dir::S, Dir::W, Dir::N, Dir::E};
    while (progress && attached < cells.size()) {
        progress = false;
        for (size_t i = 1; i < cells.size(); ++i) {
            if (inside[i]) continue;
            for (Dir d : preference) {
                int p = find_cell(step(cells[i].first, d));
                if (p >= 0 && inside[size_t(p)]) {
                    parent[i] = {p, d};
                    inside[i] = 1;
                    ++attached;
                    progress = true;
                    break;
                }
            }
        }
    }
    if (attached < cells.size()) throw PreconditionError("seed is not connected");

    // fresh tiles: tree faces get unique pair glues, internal non-tree faces
    // are nulled, outward faces keep their original glues
    std::vector<int> fresh_index(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) {
        TileType t = sys.tile(cells[i].second);
        std::string base = t.name + "~seed" + std::to_string(i);
        while (out.tile_index(base) >= 0) base += "~";
        t.name = base;
        for (Dir d : all_dirs) {
            int nbr = find_cell(step(cells[i].first, d));
            if (nbr >= 0) t.side(d) = Glue{};  // internal face; tree edges overwrite below
        }
        fresh_index[i] = out.tile_count();
        out.tiles.push_back(std::move(t));
    }
    std::set<std::string> used_labels;
    for (const TileType& t : sys.tiles)
        for (Dir d : all_dirs)
            if (!t.side(d).null()) used_labels.insert(t.side(d).label);
    for (size_t i = 1; i < cells.size(); ++i) {
        auto [p, d] = *parent[i];
        std::string label = "~seed" + std::to_string(i);
        while (used_labels.count(label)) label += "~";
        Glue g{label, 2};
        out.tiles[size_t(fresh_index[i])].side(d) = g;
        out.tiles[size_t(fresh_index[size_t(p)])].side(opposite(d)) = g;
        if (!out.relation.diagonal) out.relation.add_pair(label, label);
    }
    out.seed.cells = {{cells[0].first, fresh_index[0]}};
    return out;
}

// ── the verifier ────────────────────────────────────────────────────────────

namespace detail {

/// Extend an assembly greedily to a terminal configuration, recording steps.
inline void greedy_completion(const TileAssemblySystem& sys, Configuration& c,
                              std::vector<AttachmentStep>& steps) {
    for (;;) {
        auto fr = frontier(sys, c);
        if (fr.empty()) return;
        auto [loc, tile] = fr.front();
        c.place(loc, tile);
        steps.push_back({loc, tile});
    }
}

struct Schedule {
    const TileAssemblySystem& sys;
    const int n;
    const VerifyOptions& opt;
    Configuration c;
    std::vector<AttachmentStep> history;
    std::vector<int> name_order;
    VerificationReport report;
    bool done = false;

    Schedule(const TileAssemblySystem& s, int size, const VerifyOptions& o)
        : sys(s), n(size), opt(o), c(seed_configuration(s, size)) {
        name_order = s.name_ordered_tiles();
        report.surface = size;
    }

    // candidate enumeration without per-call sorting
    std::vector<int> probe(const Configuration& view, Coord loc) const {
        std::vector<int> out;
        if (!view.in_bounds(loc) || view.occupied(loc)) return out;
        bool adjacent = false;
        for (Dir d : all_dirs) {
            Coord nb = step(loc, d);
            if (view.in_bounds(nb) && view.occupied(nb)) adjacent = true;
        }
        if (!adjacent) return out;
        for (int t : name_order)
            if (binding_strength(sys, view, t, loc) >= sys.temperature) out.push_back(t);
        return out;
    }

    void finish(Verdict v, std::optional<Coord> loc, std::string detail,
                std::vector<AssemblyWitness> witnesses) {
        report.verdict = v;
        report.location = loc;
        report.detail = std::move(detail);
        report.witnesses = std::move(witnesses);
        done = true;
    }

    AssemblyWitness witness_with(const AttachmentStep& last, const std::string& description) {
        AssemblyWitness w;
        w.description = description;
        w.steps = history;
        w.steps.push_back(last);
        return w;
    }

    /// Two witnesses for competing candidates: the shared history, each
    /// candidate, and a greedy completion to (distinct) terminals.
    void finish_non_unique(Coord loc, const std::vector<int>& candidates) {
        std::vector<AssemblyWitness> ws;
        for (size_t i = 0; i < 2; ++i) {
            AssemblyWitness w;
            w.steps = history;
            w.steps.push_back({loc, candidates[i]});
            Configuration ext = c;
            ext.place(loc, candidates[i]);
            greedy_completion(sys, ext, w.steps);
            w.description = "assembly run ending with " + sys.tile(candidates[i]).name +
                            " at (" + std::to_string(loc.x) + "," + std::to_string(loc.y) + ")";
            ws.push_back(std::move(w));
        }
        finish(Verdict::NonUniqueTerminal, loc,
               "competing tiles " + sys.tile(candidates[0]).name + " and " +
                   sys.tile(candidates[1]).name + " at (" + std::to_string(loc.x) + "," +
                   std::to_string(loc.y) + ")",
               std::move(ws));
    }

    /// Place a single-candidate tile with the online checks.
    void place_checked(Coord loc, int tile, const std::vector<int>& candidates) {
        AttachmentStep step{loc, tile};
        if (opt.local_determinism) {
            auto ld = local_determinism_online(sys, c, step, &candidates);
            if (!ld.ok) {
                finish(Verdict::NotLocallyDeterministic, loc, ld.reason,
                       {witness_with(step, ld.reason)});
                return;
            }
        }
        c.place(loc, tile);
        history.push_back(step);
        // history already ends with this step, so the witness is history itself
        if (auto v = rectilinearity_check(sys, c, step, opt.strict_paper_rectilinearity))
            finish(Verdict::NotRectilinear, v->loc, v->reason,
                   {AssemblyWitness{v->reason, history}});
    }

    /// Probe a cell and resolve it: empty (by absence), unique placement, or
    /// competing candidates. Counts one evaluated configuration.
    void resolve(Coord loc) {
        ++report.configurations_evaluated;
        auto cands = probe(c, loc);
        if (cands.size() >= 2) {
            finish_non_unique(loc, cands);
            return;
        }
        if (cands.size() == 1) place_checked(loc, cands[0], cands);
        // zero candidates: the cell is decided empty, evaluated by absence
    }

    /// A candidate appearing at a corner cell with only one of its west/south
    /// precursors present grows off the staircase: not rectilinear-form.
    void corner_probe(const Configuration& view, Coord x_cell, const char* present) {
        auto cands = probe(view, x_cell);
        if (cands.empty()) return;
        AttachmentStep step{x_cell, cands.front()};
        std::string reason = "tile " + sys.tile(cands.front()).name + " can attach at (" +
                             std::to_string(x_cell.x) + "," + std::to_string(x_cell.y) +
                             ") with only the " + present + " precursor present";
        finish(Verdict::NotRectilinear, x_cell, reason, {witness_with(step, reason)});
    }

    void region(int i) {
        Coord w_cell{i - 1, i}, s_cell{i, i - 1}, x_cell{i, i};

        // configuration 1: fix the column-side cell, then probe the corner
        // against a lone west precursor
        resolve(w_cell);
        if (done) return;
        corner_probe(c, x_cell, "west");
        if (done) return;

        // configuration 2: fix the row-side cell, then probe the corner with
        // the west cell masked out so only the south precursor shows
        resolve(s_cell);
        if (done) return;
        if (c.occupied(w_cell)) {
            Configuration view = c;
            view.clear(w_cell);
            corner_probe(view, x_cell, "south");
        } else {
            corner_probe(c, x_cell, "south");
        }
        if (done) return;

        // configuration 3: the corner itself, with both precursors visible
        resolve(x_cell);
        if (done) return;

        // configuration 4: re-probe region cells decided empty earlier; a
        // late-enabled candidate binds through the corner tile, which sits
        // north or east of it
        ++report.configurations_evaluated;
        for (Coord loc : {w_cell, s_cell, x_cell}) {
            if (c.occupied(loc)) continue;
            auto cands = probe(c, loc);
            if (cands.empty()) continue;
            AttachmentStep step{loc, cands.front()};
            std::string reason = "tile " + sys.tile(cands.front()).name +
                                 " becomes attachable at (" + std::to_string(loc.x) + "," +
                                 std::to_string(loc.y) + ") only after its region corner";
            finish(Verdict::NotRectilinear, loc, reason, {witness_with(step, reason)});
            return;
        }
    }

    /// Fill enabled far-interior cells (|x-y| >= 2, away from the arms),
    /// row-major, repeating until stable. Each fill counts one evaluated
    /// configuration; unready probes are free and revisited.
    void drain() {
        bool progressed = true;
        while (progressed && !done) {
            progressed = false;
            for (int y = 1; y < n && !done; ++y)
                for (int x = 1; x < n && !done; ++x) {
                    if (std::abs(x - y) < 2) continue;
                    Coord loc{x, y};
                    if (c.occupied(loc)) continue;
                    auto cands = probe(c, loc);
                    if (cands.empty()) continue;
                    ++report.configurations_evaluated;
                    if (cands.size() >= 2) {
                        finish_non_unique(loc, cands);
                        return;
                    }
                    place_checked(loc, cands[0], cands);
                    progressed = true;
                }
        }
    }

    VerificationReport run() {
        // seed exposure check counts as the first evaluated configuration
        ++report.configurations_evaluated;
        for (const auto& [loc, tile] : sys.seed.cells) {
            (void)tile;
            if (auto v = exposure_violation(sys, c, loc, opt.strict_paper_rectilinearity)) {
                finish(Verdict::NotRectilinear, v->loc, v->reason,
                       {AssemblyWitness{v->reason, history}});
                return report;
            }
        }
        if (n == 1) {
            report.terminal = c;
            return report;
        }

        // region 1 interleaved with the boundary arms: the column needs the
        // cell at (0,1) first and the row needs (1,0)
        Coord w1{0, 1}, s1{1, 0}, x1{1, 1};
        resolve(w1);
        if (done) return report;
        corner_probe(c, x1, "west");
        if (done) return report;
        for (int y = 2; y < n && !done; ++y) resolve({0, y});
        if (done) return report;

        resolve(s1);
        if (done) return report;
        if (c.occupied(w1)) {
            Configuration view = c;
            view.clear(w1);
            corner_probe(view, x1, "south");
        } else {
            corner_probe(c, x1, "south");
        }
        if (done) return report;
        for (int x = 2; x < n && !done; ++x) resolve({x, 0});
        if (done) return report;

        resolve(x1);
        if (done) return report;
        ++report.configurations_evaluated;  // region 1 configuration 4
        for (Coord loc : {w1, s1, x1}) {
            if (c.occupied(loc)) continue;
            auto cands = probe(c, loc);
            if (cands.empty()) continue;
            AttachmentStep step{loc, cands.front()};
            std::string reason = "tile " + sys.tile(cands.front()).name +
                                 " becomes attachable at (" + std::to_string(loc.x) + "," +
                                 std::to_string(loc.y) + ") only after its region corner";
            finish(Verdict::NotRectilinear, loc, reason, {witness_with(step, reason)});
            return report;
        }

        for (int i = 2; i < n && !done; ++i) {
            drain();
            if (done) break;
            region(i);
        }
        if (done) return report;

        drain();
        if (done) return report;

        // account for far cells that stayed empty: evaluated by absence
        for (int y = 1; y < n; ++y)
            for (int x = 1; x < n; ++x)
                if (std::abs(x - y) >= 2 && !c.occupied({x, y}))
                    ++report.configurations_evaluated;

        // closing sweep: late-enabled candidates at cells outside the far
        // interior would bind through a north or east neighbor
        for (int y = 0; y < n && !done; ++y)
            for (int x = 0; x < n && !done; ++x) {
                if (std::abs(x - y) >= 2 && x >= 1 && y >= 1) continue;
                Coord loc{x, y};
                if (c.occupied(loc)) continue;
                auto cands = probe(c, loc);
                if (cands.empty()) continue;
                AttachmentStep step{loc, cands.front()};
                std::string reason = "tile " + sys.tile(cands.front()).name +
                                     " becomes attachable at (" + std::to_string(loc.x) + "," +
                                     std::to_string(loc.y) + ") after its own schedule pass";
                finish(Verdict::NotRectilinear, loc, reason, {witness_with(step, reason)});
            }
        if (done) return report;

        report.terminal = c;
        return report;
    }
};

}  // namespace detail

/// Verify unique rectilinear terminal assembly on an n-by-n surface. The seed
/// must be a single tile unless re-encoding is requested in the options.
inline VerificationReport verify(const TileAssemblySystem& sys, int n,
                                 const VerifyOptions& options = {}) {
    if (!sys.seed.singleton()) {
        if (!options.reencode_multi_tile_seed)
            throw SeedNotSingleton("the verifier requires a single-tile seed; "
                                   "re-encoding is available by option");
        return verify(reencode_seed(sys), n, options);
    }
    detail::Schedule schedule(sys, n, options);
    return schedule.run();
}

}  // namespace tascheck
