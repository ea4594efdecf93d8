#pragma once
// Programmatic copies of the fixture systems under data/. One ingest test
// asserts these match the parsed files, so everything else can use either
// route interchangeably.

#include <tascheck/core.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fixtures {

inline std::string data_path(const std::string& name) {
    return std::string(TASCHECK_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

using tascheck::Glue;
using tascheck::TileAssemblySystem;
using tascheck::TileType;

inline TileType make_tile(std::string name, Glue n, Glue e, Glue s, Glue w) {
    TileType t;
    t.name = std::move(name);
    t.side(tascheck::Dir::N) = std::move(n);
    t.side(tascheck::Dir::E) = std::move(e);
    t.side(tascheck::Dir::S) = std::move(s);
    t.side(tascheck::Dir::W) = std::move(w);
    return t;
}

inline void seed_at_origin(TileAssemblySystem& sys, const std::string& name) {
    sys.seed.cells = {{{0, 0}, sys.tile_index(name)}};
}

/// Seven-tile xor system: corner seed with strength-2 V/H glues, column tile L
/// growing north at x=0, row tile B growing east at y=0, and rule tiles
/// "<w>+<s>" binding cooperatively with output w^s presented north and east.
inline TileAssemblySystem sierpinski() {
    TileAssemblySystem sys;
    auto bit = [](int v) { return Glue{std::to_string(v), 1}; };
    sys.tiles.push_back(make_tile("S", {"V", 2}, {"H", 2}, {}, {}));
    for (int w = 0; w <= 1; ++w)
        for (int s = 0; s <= 1; ++s) {
            int v = w ^ s;
            sys.tiles.push_back(make_tile(std::to_string(w) + "+" + std::to_string(s),
                                          bit(v), bit(v), bit(s), bit(w)));
        }
    sys.tiles.push_back(make_tile("L", {"V", 2}, bit(1), {"V", 2}, {}));
    sys.tiles.push_back(make_tile("B", bit(1), {"H", 2}, {}, {"H", 2}));
    seed_at_origin(sys, "S");
    return sys;
}

/// Same boundary scheme, rule tiles compute (w + s) mod 3 over inputs {0,1,2}.
inline TileAssemblySystem carpet() {
    TileAssemblySystem sys;
    auto trit = [](int v) { return Glue{std::to_string(v), 1}; };
    sys.tiles.push_back(make_tile("S", {"V", 2}, {"H", 2}, {}, {}));
    for (int w = 0; w <= 2; ++w)
        for (int s = 0; s <= 2; ++s) {
            int v = (w + s) % 3;
            sys.tiles.push_back(make_tile(std::to_string(w) + "+" + std::to_string(s),
                                          trit(v), trit(v), trit(s), trit(w)));
        }
    sys.tiles.push_back(make_tile("L", {"V", 2}, trit(1), {"V", 2}, {}));
    sys.tiles.push_back(make_tile("B", trit(1), {"H", 2}, {}, {"H", 2}));
    seed_at_origin(sys, "S");
    return sys;
}

/// Sierpinski plus a competitor for the (west 1, south 1) inputs; the first
/// interior cell that sees 1/1 admits two tiles, so two terminals exist.
inline TileAssemblySystem ambiguous() {
    TileAssemblySystem sys = sierpinski();
    Glue one{"1", 1};
    sys.tiles.push_back(make_tile("1+1b", one, one, one, one));
    return sys;
}

/// Three-tile non-rectilinear mutant: U sits above the seed and offers a
/// strength-2 east glue; D attaches east of U, then a second D binds BELOW the
/// first through its north side (downward growth).
inline TileAssemblySystem downgrow() {
    TileAssemblySystem sys;
    sys.tiles.push_back(make_tile("S", {"V", 2}, {}, {}, {}));
    sys.tiles.push_back(make_tile("U", {}, {"E", 2}, {"V", 2}, {}));
    sys.tiles.push_back(make_tile("D", {"F", 2}, {}, {"F", 2}, {"E", 2}));
    seed_at_origin(sys, "S");
    return sys;
}

/// Over-binding mutant: alternating column tiles La/Lb climb the left edge,
/// and Lb's strength-2 east glue feeds R, which then binds with total
/// strength 3 (south 1 + west 2) — more than the temperature, so the local
/// determinism check rejects it. Reaching R's cell requires the literal
/// west-side exposure reading; the corrected reading already rejects Lb's
/// east glue as an exposure.
inline TileAssemblySystem overbind() {
    TileAssemblySystem sys;
    sys.tiles.push_back(make_tile("S", {"V", 2}, {"H", 2}, {}, {}));
    sys.tiles.push_back(make_tile("La", {"Va", 2}, {"1", 1}, {"V", 2}, {}));
    sys.tiles.push_back(make_tile("Lb", {"V", 2}, {"Y", 2}, {"Va", 2}, {}));
    sys.tiles.push_back(make_tile("B", {"1", 1}, {"H", 2}, {}, {"H", 2}));
    Glue one{"1", 1};
    sys.tiles.push_back(make_tile("1+1", {"0", 1}, {"0", 1}, one, one));
    sys.tiles.push_back(make_tile("R", {}, {}, {"0", 1}, {"Y", 2}));
    seed_at_origin(sys, "S");
    return sys;
}

}  // namespace fixtures
