#pragma once
// File formats: the ISU-TAS tile set / seed list pair, and a self-contained
// native text format (TASV1) that additionally carries an explicit glue
// relation. Parsers never throw on malformed input; they return a document or
// positioned diagnostics (1-based line/column). Writers are deterministic so
// round-trips are exact.

#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace tascheck {

// ── diagnostics ─────────────────────────────────────────────────────────────

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    int line = 1;
    int column = 1;
    std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        if (d.severity == Diagnostic::Severity::error) return true;
    return false;
}

/// Either a value (no errors; warnings allowed) or error diagnostics.
template <class T>
struct ParseResult {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value(); }
};

// ── documents ───────────────────────────────────────────────────────────────

struct TileRecord {
    std::string name;
    std::array<int, 4> binds{0, 0, 0, 0};        // Dir order N,E,S,W
    std::array<std::string, 4> labels;           // empty = no label
    std::string display;
    int line = 1;  // line of the TILENAME key
};

struct TilesetDocument {
    std::vector<TileRecord> records;
};

struct SeedEntry {
    std::string name;
    int x = 0;
    int y = 0;
    int line = 1;
};

struct SeedDocument {
    std::vector<SeedEntry> entries;
};

// ── low-level helpers ───────────────────────────────────────────────────────

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return lines;
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; }

struct Token {
    std::string_view text;
    int column = 1;  // 1-based
};

inline std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        if (i >= line.size()) break;
        size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        out.push_back({line.substr(start, i - start), int(start) + 1});
    }
    return out;
}

inline bool parse_int(std::string_view s, int& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

inline std::string_view rtrim(std::string_view s) {
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace detail

// ── ISU-TAS tile set parser ─────────────────────────────────────────────────

inline ParseResult<TilesetDocument> parse_tileset(std::string_view text) {
    using detail::is_space;
    ParseResult<TilesetDocument> result;
    TilesetDocument doc;
    std::vector<Diagnostic>& ds = result.diagnostics;

    auto err = [&](int line, int col, std::string msg) {
        ds.push_back({Diagnostic::Severity::error, line, col, std::move(msg)});
    };
    auto warn = [&](int line, int col, std::string msg) {
        ds.push_back({Diagnostic::Severity::warning, line, col, std::move(msg)});
    };

    bool open = false;
    TileRecord rec;
    std::vector<std::string> keys_seen;

    auto lines = detail::split_lines(text);
    for (size_t li = 0; li < lines.size(); ++li) {
        int line = int(li) + 1;
        std::string_view raw = lines[li];

        size_t ks = 0;
        while (ks < raw.size() && is_space(raw[ks])) ++ks;
        if (ks >= raw.size() || raw[ks] == '#') continue;
        size_t ke = ks;
        while (ke < raw.size() && !is_space(raw[ke])) ++ke;
        std::string key(raw.substr(ks, ke - ks));
        int key_col = int(ks) + 1;

        size_t vs = ke;
        while (vs < raw.size() && is_space(raw[vs])) ++vs;
        std::string value(detail::rtrim(raw.substr(vs)));
        int value_col = vs < raw.size() ? int(vs) + 1 : int(ke) + 1;

        auto require_open = [&]() {
            if (!open) err(line, key_col, key + " outside a tile record (missing TILENAME)");
            return open;
        };
        auto note_key = [&]() {
            if (std::find(keys_seen.begin(), keys_seen.end(), key) != keys_seen.end())
                warn(line, key_col, "duplicate " + key + " in record; last value wins");
            keys_seen.push_back(key);
        };
        auto bind_value = [&](Dir d) {
            if (!require_open()) return;
            note_key();
            int v = 0;
            if (!detail::parse_int(value, v))
                err(line, value_col, key + " requires an integer strength");
            else if (v < 0 || v > 2)
                err(line, value_col, key + " strength must be 0, 1, or 2");
            else
                rec.binds[size_t(d)] = v;
        };
        auto label_value = [&](Dir d) {
            if (!require_open()) return;
            note_key();
            rec.labels[size_t(d)] = value;
        };

        if (key == "TILENAME") {
            if (open)
                err(line, key_col,
                    "TILENAME while record '" + rec.name + "' is still open (missing CREATE)");
            if (value.empty()) err(line, value_col, "TILENAME requires a name");
            open = true;
            rec = TileRecord{};
            rec.name = value;
            rec.line = line;
            keys_seen.clear();
        } else if (key == "CREATE") {
            if (!open) {
                err(line, key_col, "CREATE outside a tile record (missing TILENAME)");
            } else {
                for (const auto& r : doc.records)
                    if (r.name == rec.name)
                        err(rec.line, key_col, "duplicate tile name '" + rec.name + "'");
                doc.records.push_back(rec);
                open = false;
            }
        } else if (key == "LABEL") {
            if (require_open()) {
                note_key();
                rec.display = value;
            }
        } else if (key == "NORTHBIND") {
            bind_value(Dir::N);
        } else if (key == "EASTBIND") {
            bind_value(Dir::E);
        } else if (key == "SOUTHBIND") {
            bind_value(Dir::S);
        } else if (key == "WESTBIND") {
            bind_value(Dir::W);
        } else if (key == "NORTHLABEL") {
            label_value(Dir::N);
        } else if (key == "EASTLABEL") {
            label_value(Dir::E);
        } else if (key == "SOUTHLABEL") {
            label_value(Dir::S);
        } else if (key == "WESTLABEL") {
            label_value(Dir::W);
        } else {
            warn(line, key_col, "unknown key '" + key + "'");
        }
    }
    if (open) err(rec.line, 1, "record '" + rec.name + "' missing CREATE");

    if (!has_errors(ds)) result.value = std::move(doc);
    return result;
}

// ── seed list parser ────────────────────────────────────────────────────────

inline ParseResult<SeedDocument> parse_seed(std::string_view text) {
    ParseResult<SeedDocument> result;
    SeedDocument doc;
    std::vector<Diagnostic>& ds = result.diagnostics;

    auto lines = detail::split_lines(text);
    for (size_t li = 0; li < lines.size(); ++li) {
        int line = int(li) + 1;
        std::string_view raw = lines[li];
        if (size_t hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        auto toks = detail::split_tokens(raw);
        if (toks.empty()) continue;
        if (toks.size() < 3) {
            ds.push_back({Diagnostic::Severity::error, line, toks[0].column,
                          "expected `name x y`"});
            continue;
        }
        SeedEntry e;
        e.line = line;
        const auto& tx = toks[toks.size() - 2];
        const auto& ty = toks[toks.size() - 1];
        bool ok = true;
        if (!detail::parse_int(tx.text, e.x)) {
            ds.push_back({Diagnostic::Severity::error, line, tx.column,
                          "x coordinate must be an integer"});
            ok = false;
        }
        if (!detail::parse_int(ty.text, e.y)) {
            ds.push_back({Diagnostic::Severity::error, line, ty.column,
                          "y coordinate must be an integer"});
            ok = false;
        }
        std::string name;
        for (size_t i = 0; i + 2 < toks.size(); ++i) {
            if (i) name += ' ';
            name += std::string(toks[i].text);
        }
        e.name = name;
        if (ok) doc.entries.push_back(std::move(e));
    }
    if (!has_errors(ds)) result.value = std::move(doc);
    return result;
}

// ── elaboration ─────────────────────────────────────────────────────────────

namespace detail {

/// Seed self-assembly check: the seed must be rebuildable from its root cell
/// (the one at (0,0) if present, else the row-major first) by single-tile
/// threshold attachments. Under-glued or disconnected seeds fail.
inline bool seed_self_assembles(const TileAssemblySystem& sys) {
    const auto& cells = sys.seed.cells;
    if (cells.size() <= 1) return true;
    int span = 0;
    for (const auto& [loc, tile] : cells) span = std::max({span, loc.x + 1, loc.y + 1});
    Configuration full(span);
    for (const auto& [loc, tile] : cells) full.place(loc, tile);

    Configuration done(span);
    size_t root = 0;
    for (size_t i = 0; i < cells.size(); ++i)
        if (cells[i].first == Coord{0, 0}) root = i;
    done.place(cells[root].first, cells[root].second);
    size_t placed = 1;
    bool progress = true;
    while (progress && placed < cells.size()) {
        progress = false;
        for (const auto& [loc, tile] : cells) {
            if (done.occupied(loc)) continue;
            if (binding_strength(sys, done, tile, loc) >= sys.temperature) {
                done.place(loc, tile);
                ++placed;
                progress = true;
            }
        }
    }
    return placed == cells.size();
}

}  // namespace detail

/// Resolve a tile set document plus seed document into a checked system:
/// names resolved, seed translated so its bounding box corner sits at (0,0),
/// connectivity and self-assembly of the seed validated, diagonal relation.
inline ParseResult<TileAssemblySystem> elaborate(const TilesetDocument& tiles,
                                                 const SeedDocument& seed) {
    ParseResult<TileAssemblySystem> result;
    std::vector<Diagnostic>& ds = result.diagnostics;
    auto err = [&](int line, int col, std::string msg) {
        ds.push_back({Diagnostic::Severity::error, line, col, std::move(msg)});
    };

    if (tiles.records.empty()) {
        err(1, 1, "tile set is empty");
        return result;
    }
    if (seed.entries.empty()) {
        err(1, 1, "seed is empty");
        return result;
    }

    TileAssemblySystem sys;
    for (const auto& r : tiles.records) {
        if (sys.tile_index(r.name) >= 0) {
            err(r.line, 1, "duplicate tile name '" + r.name + "'");
            continue;
        }
        TileType t;
        t.name = r.name;
        t.display = r.display;
        for (Dir d : all_dirs)
            t.side(d) = Glue{r.labels[size_t(d)], r.binds[size_t(d)]};
        sys.tiles.push_back(std::move(t));
    }

    int minx = seed.entries.front().x, miny = seed.entries.front().y;
    for (const auto& e : seed.entries) {
        minx = std::min(minx, e.x);
        miny = std::min(miny, e.y);
    }
    std::vector<int> entry_lines;
    for (const auto& e : seed.entries) {
        int idx = sys.tile_index(e.name);
        if (idx < 0) {
            err(e.line, 1, "seed references unknown tile '" + e.name + "'");
            continue;
        }
        Coord loc{e.x - minx, e.y - miny};
        for (const auto& [prev, t] : sys.seed.cells)
            if (prev == loc) err(e.line, 1, "duplicate seed location");
        sys.seed.cells.emplace_back(loc, idx);
        entry_lines.push_back(e.line);
    }
    if (has_errors(ds)) return result;

    std::sort(sys.seed.cells.begin(), sys.seed.cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // connectivity over 4-adjacency
    if (sys.seed.cells.size() > 1) {
        std::vector<char> reached(sys.seed.cells.size(), 0);
        std::vector<size_t> work{0};
        reached[0] = 1;
        while (!work.empty()) {
            size_t i = work.back();
            work.pop_back();
            for (size_t j = 0; j < sys.seed.cells.size(); ++j) {
                if (reached[j]) continue;
                Coord a = sys.seed.cells[i].first, b = sys.seed.cells[j].first;
                if (std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1) {
                    reached[j] = 1;
                    work.push_back(j);
                }
            }
        }
        for (size_t j = 0; j < reached.size(); ++j)
            if (!reached[j]) {
                err(entry_lines.empty() ? 1 : entry_lines.front(), 1, "seed is not connected");
                return result;
            }
        if (!detail::seed_self_assembles(sys)) {
            err(entry_lines.empty() ? 1 : entry_lines.front(), 1,
                "seed is not stable (cannot self-assemble from its root cell)");
            return result;
        }
    }

    result.value = std::move(sys);
    return result;
}

// ── ISU-TAS writers ─────────────────────────────────────────────────────────

inline std::string write_tileset(const TileAssemblySystem& sys) {
    if (sys.tiles.empty()) throw EmptySystem("cannot write an empty tile set");
    std::ostringstream out;
    bool first = true;
    for (const auto& t : sys.tiles) {
        if (!first) out << "\n";
        first = false;
        auto field = [&](const char* key, const std::string& v) {
            out << key;
            if (!v.empty()) out << " " << v;
            out << "\n";
        };
        out << "TILENAME " << t.name << "\n";
        field("LABEL", t.display);
        out << "NORTHBIND " << t.side(Dir::N).strength << "\n";
        out << "EASTBIND " << t.side(Dir::E).strength << "\n";
        out << "SOUTHBIND " << t.side(Dir::S).strength << "\n";
        out << "WESTBIND " << t.side(Dir::W).strength << "\n";
        field("NORTHLABEL", t.side(Dir::N).label);
        field("EASTLABEL", t.side(Dir::E).label);
        field("SOUTHLABEL", t.side(Dir::S).label);
        field("WESTLABEL", t.side(Dir::W).label);
        out << "CREATE\n";
    }
    return out.str();
}

inline std::string write_seed(const TileAssemblySystem& sys) {
    if (sys.seed.cells.empty()) throw EmptySystem("cannot write an empty seed");
    std::ostringstream out;
    for (const auto& [loc, tile] : sys.seed.cells)
        out << sys.tile(tile).name << " " << loc.x << " " << loc.y << "\n";
    return out.str();
}

// ── native format (TASV1) ───────────────────────────────────────────────────

namespace detail {

inline void quote_to(std::ostringstream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out << '\\';
        out << c;
    }
    out << '"';
}

struct NativeToken {
    std::string text;
    int column = 1;
    bool quoted = false;
};

/// Tokenize one native-format line; returns false on an unterminated quote.
inline bool native_tokens(std::string_view line, std::vector<NativeToken>& out) {
    out.clear();
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        if (i >= line.size()) break;
        if (line[i] == '#') break;
        NativeToken tok;
        tok.column = int(i) + 1;
        if (line[i] == '"') {
            tok.quoted = true;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char c = line[i++];
                if (c == '\\' && i < line.size()) {
                    tok.text += line[i++];
                } else if (c == '"') {
                    closed = true;
                    break;
                } else {
                    tok.text += c;
                }
            }
            if (!closed) return false;
        } else {
            size_t start = i;
            while (i < line.size() && !is_space(line[i])) ++i;
            tok.text = std::string(line.substr(start, i - start));
        }
        out.push_back(std::move(tok));
    }
    return true;
}

}  // namespace detail

inline std::string write_native(const TileAssemblySystem& sys) {
    if (sys.tiles.empty()) throw EmptySystem("cannot write an empty system");
    if (sys.seed.cells.empty()) throw EmptySystem("cannot write a system without a seed");
    std::ostringstream out;
    out << "TASV1\n";
    out << "temperature " << sys.temperature << "\n";
    if (sys.relation.diagonal) {
        out << "relation diagonal\n";
    } else {
        out << "relation explicit\n";
        for (const auto& [a, b] : sys.relation.pairs)
            if (a <= b) {
                out << "pair ";
                detail::quote_to(out, a);
                out << " ";
                detail::quote_to(out, b);
                out << "\n";
            }
    }
    for (const auto& t : sys.tiles) {
        out << "tile ";
        detail::quote_to(out, t.name);
        const char* dirs = "nesw";
        for (Dir d : all_dirs) {
            out << " " << dirs[size_t(d)] << " ";
            detail::quote_to(out, t.side(d).label);
            out << " " << t.side(d).strength;
        }
        out << " display ";
        detail::quote_to(out, t.display);
        out << "\n";
    }
    for (const auto& [loc, tile] : sys.seed.cells) {
        out << "seed ";
        detail::quote_to(out, sys.tile(tile).name);
        out << " " << loc.x << " " << loc.y << "\n";
    }
    return out.str();
}

inline ParseResult<TileAssemblySystem> parse_native(std::string_view text) {
    ParseResult<TileAssemblySystem> result;
    std::vector<Diagnostic>& ds = result.diagnostics;
    auto err = [&](int line, int col, std::string msg) {
        ds.push_back({Diagnostic::Severity::error, line, col, std::move(msg)});
    };

    auto lines = detail::split_lines(text);
    if (lines.empty() || detail::rtrim(lines[0]) != "TASV1") {
        err(1, 1, "missing TASV1 header");
        return result;
    }

    TileAssemblySystem sys;
    SeedDocument seed_doc;
    std::vector<detail::NativeToken> toks;

    for (size_t li = 1; li < lines.size(); ++li) {
        int line = int(li) + 1;
        if (!detail::native_tokens(lines[li], toks)) {
            err(line, 1, "unterminated quote");
            continue;
        }
        if (toks.empty()) continue;
        const std::string& key = toks[0].text;

        auto want = [&](size_t count) {
            if (toks.size() == count) return true;
            err(line, toks[0].column, "malformed " + key + " line");
            return false;
        };

        if (key == "temperature") {
            int v = 0;
            if (!want(2)) continue;
            if (!detail::parse_int(toks[1].text, v) || v != 2)
                err(line, toks[1].column, "only temperature 2 is supported");
            else
                sys.temperature = v;
        } else if (key == "relation") {
            if (!want(2)) continue;
            if (toks[1].text == "diagonal") {
                sys.relation = GlueRelation{};
            } else if (toks[1].text == "explicit") {
                sys.relation.diagonal = false;
                sys.relation.pairs.clear();
            } else {
                err(line, toks[1].column, "relation must be diagonal or explicit");
            }
        } else if (key == "pair") {
            if (!want(3)) continue;
            if (sys.relation.diagonal) {
                err(line, toks[0].column, "pair requires `relation explicit`");
                continue;
            }
            sys.relation.pairs.emplace(toks[1].text, toks[2].text);
            sys.relation.pairs.emplace(toks[2].text, toks[1].text);
        } else if (key == "tile") {
            // tile "name" n "lbl" s e "lbl" s s "lbl" s w "lbl" s display "d"
            if (!want(16)) continue;
            TileType t;
            t.name = toks[1].text;
            if (t.name.empty()) {
                err(line, toks[1].column, "tile name must be nonempty");
                continue;
            }
            const char* dirs = "nesw";
            bool ok = true;
            for (size_t d = 0; d < 4; ++d) {
                const auto& dir_tok = toks[2 + d * 3];
                const auto& lbl_tok = toks[3 + d * 3];
                const auto& str_tok = toks[4 + d * 3];
                if (dir_tok.text != std::string(1, dirs[d])) {
                    err(line, dir_tok.column, "expected side marker");
                    ok = false;
                    break;
                }
                int s = 0;
                if (!detail::parse_int(str_tok.text, s) || s < 0 || s > 2) {
                    err(line, str_tok.column, "glue strength must be 0, 1, or 2");
                    ok = false;
                    break;
                }
                t.sides[d] = Glue{lbl_tok.text, s};
            }
            if (!ok) continue;
            if (toks[14].text != "display") {
                err(line, toks[14].column, "expected display field");
                continue;
            }
            t.display = toks[15].text;
            if (sys.tile_index(t.name) >= 0) {
                err(line, toks[1].column, "duplicate tile name '" + t.name + "'");
                continue;
            }
            sys.tiles.push_back(std::move(t));
        } else if (key == "seed") {
            if (!want(4)) continue;
            SeedEntry e;
            e.name = toks[1].text;
            e.line = line;
            if (!detail::parse_int(toks[2].text, e.x) || !detail::parse_int(toks[3].text, e.y)) {
                err(line, toks[2].column, "seed coordinates must be integers");
                continue;
            }
            seed_doc.entries.push_back(std::move(e));
        } else {
            ds.push_back({Diagnostic::Severity::warning, line, toks[0].column,
                          "unknown key '" + key + "'"});
        }
    }
    if (has_errors(ds)) return result;

    TilesetDocument doc;  // reuse elaborate's validation via a synthetic document
    for (const auto& t : sys.tiles) {
        TileRecord r;
        r.name = t.name;
        r.display = t.display;
        for (Dir d : all_dirs) {
            r.binds[size_t(d)] = t.side(d).strength;
            r.labels[size_t(d)] = t.side(d).label;
        }
        doc.records.push_back(std::move(r));
    }
    auto elaborated = elaborate(doc, seed_doc);
    for (auto& d : elaborated.diagnostics) result.diagnostics.push_back(d);
    if (!elaborated.ok()) return result;
    elaborated.value->relation = sys.relation;
    elaborated.value->temperature = sys.temperature;
    result.value = std::move(*elaborated.value);
    return result;
}

// ── convenience ────────────────────────────────────────────────────────────

/// Parse an ISU-TAS pair and elaborate, concatenating diagnostics.
inline ParseResult<TileAssemblySystem> load_isu_tas(std::string_view tileset_text,
                                                    std::string_view seed_text) {
    ParseResult<TileAssemblySystem> result;
    auto tiles = parse_tileset(tileset_text);
    auto seed = parse_seed(seed_text);
    result.diagnostics = tiles.diagnostics;
    result.diagnostics.insert(result.diagnostics.end(), seed.diagnostics.begin(),
                              seed.diagnostics.end());
    if (!tiles.ok() || !seed.ok()) return result;
    auto sys = elaborate(*tiles.value, *seed.value);
    result.diagnostics.insert(result.diagnostics.end(), sys.diagnostics.begin(),
                              sys.diagnostics.end());
    if (sys.ok()) result.value = std::move(*sys.value);
    return result;
}

}  // namespace tascheck
