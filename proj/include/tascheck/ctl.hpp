#pragma once
// Explicit-state CTL over the assembly transition system. Atoms t^m_(i,j)
// talk about surface cells: m = 0 means cell (i,j) is empty, m >= 1 means it
// holds tile index m-1. Next-state operators (EX/AX) read the raw successor
// relation, so AX is vacuously true at deadlocks; the path quantifiers
// (EU/AU and the derived EF/AF/EG/AG) use maximal-path semantics, realized by
// giving every deadlock a self-loop. check() synthesizes witness paths for
// true EF/EU/EG and counterexample paths for failed AF/AG/AU.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "transition.hpp"

namespace tascheck {

// ── formulas ────────────────────────────────────────────────────────────────

struct Atom {
    int m = 0;  // 0 = empty, otherwise tile index m-1
    int i = 0;  // cell x
    int j = 0;  // cell y

    friend bool operator==(const Atom&, const Atom&) = default;
};

enum class FOp {
    True, AtomRef, Not, And, Or, Implies,
    EX, AX, EF, AF, EG, AG, EU, AU
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FOp op = FOp::True;
    Atom atom;          // AtomRef only
    FormulaPtr a, b;    // unary ops use a; binary use a,b
};

inline FormulaPtr f_true() { return std::make_shared<Formula>(Formula{FOp::True, {}, {}, {}}); }
inline FormulaPtr f_atom(int m, int i, int j) {
    return std::make_shared<Formula>(Formula{FOp::AtomRef, Atom{m, i, j}, {}, {}});
}
inline FormulaPtr f_not(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{FOp::Not, {}, std::move(a), {}});
}
inline FormulaPtr f_false() { return f_not(f_true()); }
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{FOp::And, {}, std::move(a), std::move(b)});
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{FOp::Or, {}, std::move(a), std::move(b)});
}
inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{FOp::Implies, {}, std::move(a), std::move(b)});
}
inline FormulaPtr f_ex(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{FOp::EX, {}, std::move(a), {}});
}
inline FormulaPtr f_ax(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{FOp::AX, {}, std::move(a), {}});
}
inline FormulaPtr f_ef(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{FOp::EF, {}, std::move(a), {}});
}
inline FormulaPtr f_af(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{FOp::AF, {}, std::move(a), {}});
}
inline FormulaPtr f_eg(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{FOp::EG, {}, std::move(a), {}});
}
inline FormulaPtr f_ag(FormulaPtr a) {
    return std::make_shared<Formula>(Formula{FOp::AG, {}, std::move(a), {}});
}
inline FormulaPtr f_eu(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{FOp::EU, {}, std::move(a), std::move(b)});
}
inline FormulaPtr f_au(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{FOp::AU, {}, std::move(a), std::move(b)});
}

/// Left-fold conjunction; empty input is `true`.
inline FormulaPtr f_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_true();
    FormulaPtr acc = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
    return acc;
}

/// Left-fold disjunction; empty input is `false`.
inline FormulaPtr f_any(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_false();
    FormulaPtr acc = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
    return acc;
}

inline bool formula_equal(const FormulaPtr& x, const FormulaPtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->op != y->op) return false;
    if (x->op == FOp::AtomRef) return x->atom == y->atom;
    return formula_equal(x->a, y->a) && formula_equal(x->b, y->b);
}

// ── printer ─────────────────────────────────────────────────────────────────

namespace detail {

// precedence levels: -> = 1 (right assoc), | = 2, & = 3, unary = 4, atoms = 5
inline int formula_level(FOp op) {
    switch (op) {
        case FOp::Implies: return 1;
        case FOp::Or: return 2;
        case FOp::And: return 3;
        case FOp::Not:
        case FOp::EX:
        case FOp::AX:
        case FOp::EF:
        case FOp::AF:
        case FOp::EG:
        case FOp::AG: return 4;
        default: return 5;
    }
}

inline void print_formula(std::ostringstream& out, const FormulaPtr& f, int min_level) {
    bool parens = formula_level(f->op) < min_level;
    if (parens) out << "(";
    switch (f->op) {
        case FOp::True: out << "true"; break;
        case FOp::AtomRef:
            out << "t[" << f->atom.m << "][" << f->atom.i << "][" << f->atom.j << "]";
            break;
        case FOp::Not:
            out << "!";
            print_formula(out, f->a, 4);
            break;
        case FOp::And:
            print_formula(out, f->a, 3);
            out << " & ";
            print_formula(out, f->b, 3);
            break;
        case FOp::Or:
            print_formula(out, f->a, 2);
            out << " | ";
            print_formula(out, f->b, 2);
            break;
        case FOp::Implies:
            print_formula(out, f->a, 2);  // implies is right-associative
            out << " -> ";
            print_formula(out, f->b, 1);
            break;
        case FOp::EX: out << "EX "; print_formula(out, f->a, 4); break;
        case FOp::AX: out << "AX "; print_formula(out, f->a, 4); break;
        case FOp::EF: out << "EF "; print_formula(out, f->a, 4); break;
        case FOp::AF: out << "AF "; print_formula(out, f->a, 4); break;
        case FOp::EG: out << "EG "; print_formula(out, f->a, 4); break;
        case FOp::AG: out << "AG "; print_formula(out, f->a, 4); break;
        case FOp::EU:
            out << "E[";
            print_formula(out, f->a, 1);
            out << " U ";
            print_formula(out, f->b, 1);
            out << "]";
            break;
        case FOp::AU:
            out << "A[";
            print_formula(out, f->a, 1);
            out << " U ";
            print_formula(out, f->b, 1);
            out << "]";
            break;
    }
    if (parens) out << ")";
}

}  // namespace detail

inline std::string to_text(const FormulaPtr& f) {
    std::ostringstream out;
    detail::print_formula(out, f, 0);
    return out.str();
}

// ── text parser ─────────────────────────────────────────────────────────────

struct FormulaParse {
    FormulaPtr formula;
    std::string error;
    int column = 0;  // 1-based position of the error

    bool ok() const { return formula != nullptr; }
};

namespace detail {

struct FormulaParser {
    std::string_view text;
    size_t pos = 0;
    std::string error;
    int error_col = 0;

    void fail(size_t at, std::string msg) {
        if (error.empty()) {
            error = std::move(msg);
            error_col = int(at) + 1;
        }
    }
    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    static bool word_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_';
    }
    std::string_view peek_word() {
        skip_ws();
        size_t end = pos;
        while (end < text.size() && word_char(text[end])) ++end;
        return text.substr(pos, end - pos);
    }
    bool eat_word(std::string_view w) {
        if (peek_word() == w) {
            pos += w.size();
            return true;
        }
        return false;
    }
    bool parse_index(int& out) {
        if (!eat('[')) {
            fail(pos, "expected '['");
            return false;
        }
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) {
            fail(start, "expected an index");
            return false;
        }
        if (pos - start > 6) {
            fail(start, "index too large");
            return false;
        }
        out = std::stoi(std::string(text.substr(start, pos - start)));
        if (!eat(']')) {
            fail(pos, "expected ']'");
            return false;
        }
        return true;
    }

    FormulaPtr parse_implies() {
        FormulaPtr lhs = parse_or();
        if (!lhs) return nullptr;
        skip_ws();
        if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
            pos += 2;
            FormulaPtr rhs = parse_implies();
            if (!rhs) return nullptr;
            return f_implies(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }
    FormulaPtr parse_or() {
        FormulaPtr lhs = parse_and();
        if (!lhs) return nullptr;
        while (eat('|')) {
            FormulaPtr rhs = parse_and();
            if (!rhs) return nullptr;
            lhs = f_or(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }
    FormulaPtr parse_and() {
        FormulaPtr lhs = parse_unary();
        if (!lhs) return nullptr;
        while (eat('&')) {
            FormulaPtr rhs = parse_unary();
            if (!rhs) return nullptr;
            lhs = f_and(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }
    FormulaPtr parse_until(bool universal) {
        if (!eat('[')) {
            fail(pos, "expected '[' after path quantifier");
            return nullptr;
        }
        FormulaPtr lhs = parse_implies();
        if (!lhs) return nullptr;
        if (!eat_word("U")) {
            skip_ws();
            fail(pos, "expected 'U'");
            return nullptr;
        }
        FormulaPtr rhs = parse_implies();
        if (!rhs) return nullptr;
        if (!eat(']')) {
            fail(pos, "expected ']'");
            return nullptr;
        }
        return universal ? f_au(std::move(lhs), std::move(rhs))
                         : f_eu(std::move(lhs), std::move(rhs));
    }
    FormulaPtr parse_unary() {
        skip_ws();
        if (eat('!')) {
            FormulaPtr a = parse_unary();
            return a ? f_not(std::move(a)) : nullptr;
        }
        std::string_view w = peek_word();
        auto temporal = [&](FormulaPtr (*wrap)(FormulaPtr)) -> FormulaPtr {
            pos += 2;
            FormulaPtr a = parse_unary();
            return a ? wrap(std::move(a)) : nullptr;
        };
        if (w == "EX") return temporal(f_ex);
        if (w == "AX") return temporal(f_ax);
        if (w == "EF") return temporal(f_ef);
        if (w == "AF") return temporal(f_af);
        if (w == "EG") return temporal(f_eg);
        if (w == "AG") return temporal(f_ag);
        if (w == "E") {
            pos += 1;
            return parse_until(false);
        }
        if (w == "A") {
            pos += 1;
            return parse_until(true);
        }
        return parse_primary();
    }
    FormulaPtr parse_primary() {
        skip_ws();
        if (eat('(')) {
            FormulaPtr inner = parse_implies();
            if (!inner) return nullptr;
            if (!eat(')')) {
                fail(pos, "expected ')'");
                return nullptr;
            }
            return inner;
        }
        std::string_view w = peek_word();
        if (w == "true") {
            pos += w.size();
            return f_true();
        }
        if (w == "terminal") {  // macro: no attachment is possible
            pos += w.size();
            return f_not(f_ex(f_true()));
        }
        if (w == "t") {
            pos += 1;
            int m = 0, i = 0, j = 0;
            if (!parse_index(m) || !parse_index(i) || !parse_index(j)) return nullptr;
            return f_atom(m, i, j);
        }
        fail(pos, pos >= text.size() ? "unexpected end of formula" : "unexpected token");
        return nullptr;
    }
};

}  // namespace detail

inline FormulaParse parse_formula(std::string_view text) {
    detail::FormulaParser p{text};
    FormulaPtr f = p.parse_implies();
    FormulaParse out;
    if (f) {
        p.skip_ws();
        if (p.pos != p.text.size()) {
            out.error = "trailing input after formula";
            out.column = int(p.pos) + 1;
            return out;
        }
        out.formula = std::move(f);
        return out;
    }
    out.error = p.error.empty() ? "malformed formula" : p.error;
    out.column = p.error_col == 0 ? int(p.pos) + 1 : p.error_col;
    return out;
}

// ── Kripke view ─────────────────────────────────────────────────────────────

/// Minimal model view the checker runs against. For tile systems use
/// kripke_of(); tests may supply arbitrary graphs and labelings. The label
/// function answers atoms and may throw AtomOutOfRange.
struct Kripke {
    int num_states = 0;
    int initial = 0;
    std::vector<std::vector<int>> succ;
    std::function<bool(int, const Atom&)> label;
};

/// View a built transition system as a Kripke structure. Borrows `ts` (and
/// nothing else): keep it alive for the lifetime of the view.
inline Kripke kripke_of(const TileAssemblySystem& sys, const TransitionSystem& ts) {
    Kripke k;
    k.num_states = int(ts.states.size());
    k.initial = 0;
    k.succ.resize(ts.states.size());
    for (size_t s = 0; s < ts.edges.size(); ++s)
        for (const auto& e : ts.edges[s]) k.succ[s].push_back(e.target);
    int tiles = sys.tile_count();
    int n = ts.n;
    const TransitionSystem* tsp = &ts;
    k.label = [tsp, tiles, n](int state, const Atom& a) -> bool {
        if (a.m < 0 || a.m > tiles || a.i < 0 || a.i >= n || a.j < 0 || a.j >= n)
            throw AtomOutOfRange("atom t[" + std::to_string(a.m) + "][" + std::to_string(a.i) +
                                 "][" + std::to_string(a.j) + "] out of range");
        int cell = tsp->states[size_t(state)].at({a.i, a.j});
        return a.m == 0 ? cell < 0 : cell == a.m - 1;
    };
    return k;
}

// ── checker ─────────────────────────────────────────────────────────────────

/// A path through the model. `lasso_start >= 0` marks an infinite path that
/// repeats states[lasso_start..] forever; -1 is a finite path (for maximal
/// paths, one ending in a deadlock).
struct Path {
    std::vector<int> states;
    int lasso_start = -1;
};

struct CheckResult {
    std::vector<char> sat;  // per-state truth of the whole formula
    bool holds = false;     // truth at the initial state
    std::optional<Path> witness;
};

namespace detail {

class Checker {
public:
    explicit Checker(const Kripke& k) : K(k) {
        aug.resize(size_t(K.num_states));
        pred.resize(size_t(K.num_states));
        for (int s = 0; s < K.num_states; ++s) {
            aug[size_t(s)] = K.succ[size_t(s)];
            if (aug[size_t(s)].empty()) aug[size_t(s)].push_back(s);
        }
        for (int s = 0; s < K.num_states; ++s)
            for (int t : aug[size_t(s)]) pred[size_t(t)].push_back(s);
    }

    const std::vector<char>& sat(const FormulaPtr& f) {
        auto it = memo.find(f.get());
        if (it != memo.end()) return it->second;
        std::vector<char> out;
        switch (f->op) {
            case FOp::True: out.assign(size_t(K.num_states), 1); break;
            case FOp::AtomRef: {
                out.resize(size_t(K.num_states));
                for (int s = 0; s < K.num_states; ++s) out[size_t(s)] = K.label(s, f->atom);
                break;
            }
            case FOp::Not: {
                out = sat(f->a);
                for (auto& v : out) v = !v;
                break;
            }
            case FOp::And: {
                out = sat(f->a);
                const auto& rb = sat(f->b);
                for (size_t s = 0; s < out.size(); ++s) out[s] = out[s] && rb[s];
                break;
            }
            case FOp::Or: {
                out = sat(f->a);
                const auto& rb = sat(f->b);
                for (size_t s = 0; s < out.size(); ++s) out[s] = out[s] || rb[s];
                break;
            }
            case FOp::Implies: {
                out = sat(f->a);
                const auto& rb = sat(f->b);
                for (size_t s = 0; s < out.size(); ++s) out[s] = !out[s] || rb[s];
                break;
            }
            case FOp::EX: {
                const auto& ra = sat(f->a);
                out.assign(size_t(K.num_states), 0);
                for (int s = 0; s < K.num_states; ++s)
                    for (int t : K.succ[size_t(s)])
                        if (ra[size_t(t)]) {
                            out[size_t(s)] = 1;
                            break;
                        }
                break;
            }
            case FOp::AX: {
                const auto& ra = sat(f->a);
                out.assign(size_t(K.num_states), 1);
                for (int s = 0; s < K.num_states; ++s)
                    for (int t : K.succ[size_t(s)])
                        if (!ra[size_t(t)]) {
                            out[size_t(s)] = 0;
                            break;
                        }
                break;
            }
            case FOp::EF: out = eval_eu(ones(), sat(f->a)); break;
            case FOp::AF: out = eval_au(ones(), sat(f->a)); break;
            case FOp::EG: {
                std::vector<char> na = sat(f->a);
                for (auto& v : na) v = !v;
                out = eval_au(ones(), na);
                for (auto& v : out) v = !v;  // EG f = !AF !f
                break;
            }
            case FOp::AG: {
                std::vector<char> na = sat(f->a);
                for (auto& v : na) v = !v;
                out = eval_eu(ones(), na);
                for (auto& v : out) v = !v;  // AG f = !EF !f
                break;
            }
            case FOp::EU: out = eval_eu(sat(f->a), sat(f->b)); break;
            case FOp::AU: out = eval_au(sat(f->a), sat(f->b)); break;
        }
        return memo.emplace(f.get(), std::move(out)).first->second;
    }

    /// Least fixpoint of E[f U g] over augmented (maximal-path) successors.
    std::vector<char> eval_eu(const std::vector<char>& f, const std::vector<char>& g) const {
        std::vector<char> out = g;
        std::vector<int> work;
        for (int s = 0; s < K.num_states; ++s)
            if (g[size_t(s)]) work.push_back(s);
        while (!work.empty()) {
            int s = work.back();
            work.pop_back();
            for (int p : pred[size_t(s)])
                if (!out[size_t(p)] && f[size_t(p)]) {
                    out[size_t(p)] = 1;
                    work.push_back(p);
                }
        }
        return out;
    }

    /// Least fixpoint of A[f U g] over augmented successors, by counting
    /// successors not yet known to satisfy the until.
    std::vector<char> eval_au(const std::vector<char>& f, const std::vector<char>& g) const {
        std::vector<char> out = g;
        std::vector<size_t> remaining(size_t(K.num_states));
        std::vector<int> work;
        for (int s = 0; s < K.num_states; ++s) {
            remaining[size_t(s)] = aug[size_t(s)].size();
            if (g[size_t(s)]) work.push_back(s);
        }
        while (!work.empty()) {
            int s = work.back();
            work.pop_back();
            for (int p : pred[size_t(s)]) {
                if (out[size_t(p)]) continue;
                if (--remaining[size_t(p)] == 0 && f[size_t(p)]) {
                    out[size_t(p)] = 1;
                    work.push_back(p);
                }
            }
        }
        return out;
    }

    const std::vector<char>& ones() {
        if (all_ones.empty()) all_ones.assign(size_t(K.num_states), 1);
        return all_ones;
    }

    const std::vector<std::vector<int>>& augmented() const { return aug; }

private:
    const Kripke& K;
    std::vector<std::vector<int>> aug;   // successors with deadlock self-loops
    std::vector<std::vector<int>> pred;  // predecessors over `aug`
    std::unordered_map<const Formula*, std::vector<char>> memo;
    std::vector<char> all_ones;
};

/// Shortest path from `from` to a target state, expanding only interior
/// states, over raw successors. The start needs no interior membership when
/// it is itself a target.
inline std::optional<Path> forward_path(const Kripke& K, int from, const std::vector<char>& interior,
                                        const std::vector<char>& target) {
    if (target[size_t(from)]) return Path{{from}, -1};
    if (!interior[size_t(from)]) return std::nullopt;
    std::vector<int> parent(size_t(K.num_states), -2);
    parent[size_t(from)] = -1;
    std::vector<int> queue{from};
    for (size_t head = 0; head < queue.size(); ++head) {
        int s = queue[head];
        for (int t : K.succ[size_t(s)]) {
            if (parent[size_t(t)] != -2) continue;
            parent[size_t(t)] = s;
            if (target[size_t(t)]) {
                Path p;
                for (int cur = t; cur != -1; cur = parent[size_t(cur)])
                    p.states.push_back(cur);
                std::reverse(p.states.begin(), p.states.end());
                return p;
            }
            if (interior[size_t(t)]) queue.push_back(t);
        }
    }
    return std::nullopt;
}

/// A maximal path from `from` staying inside `region`: either reaches a
/// deadlock of the raw relation or closes a cycle (lasso). Assumes the region
/// is closed in the EG sense (every non-deadlock region state has a region
/// successor), which the fixpoint guarantees.
inline std::optional<Path> region_maximal_path(const Kripke& K, int from,
                                               const std::vector<char>& region) {
    if (!region[size_t(from)]) return std::nullopt;
    enum : char { kFresh, kOnStack, kDone };
    std::vector<char> mark(size_t(K.num_states), kFresh);
    std::vector<int> path;                    // current DFS stack of states
    std::vector<size_t> next_child;           // per path entry, next succ index
    path.push_back(from);
    next_child.push_back(0);
    mark[size_t(from)] = kOnStack;
    while (!path.empty()) {
        int s = path.back();
        if (K.succ[size_t(s)].empty()) return Path{path, -1};  // maximal: deadlock
        size_t& idx = next_child.back();
        bool descended = false;
        while (idx < K.succ[size_t(s)].size()) {
            int t = K.succ[size_t(s)][idx++];
            if (!region[size_t(t)]) continue;
            if (mark[size_t(t)] == kOnStack) {
                Path p{path, -1};
                for (size_t i = 0; i < p.states.size(); ++i)
                    if (p.states[i] == t) {
                        p.lasso_start = int(i);
                        break;
                    }
                return p;
            }
            if (mark[size_t(t)] == kFresh) {
                mark[size_t(t)] = kOnStack;
                path.push_back(t);
                next_child.push_back(0);
                descended = true;
                break;
            }
        }
        if (!descended && (path.empty() || path.back() == s) && idx >= K.succ[size_t(s)].size()) {
            mark[size_t(s)] = kDone;
            path.pop_back();
            next_child.pop_back();
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline CheckResult check(const Kripke& K, const FormulaPtr& f) {
    detail::Checker ck(K);
    CheckResult r;
    r.sat = ck.sat(f);
    r.holds = r.sat[size_t(K.initial)] != 0;

    auto negate = [](std::vector<char> v) {
        for (auto& x : v) x = !x;
        return v;
    };
    const int init = K.initial;

    switch (f->op) {
        case FOp::EF:
            if (r.holds) r.witness = detail::forward_path(K, init, ck.ones(), ck.sat(f->a));
            break;
        case FOp::EU:
            if (r.holds) r.witness = detail::forward_path(K, init, ck.sat(f->a), ck.sat(f->b));
            break;
        case FOp::EG:
            if (r.holds) {
                // r.sat is exactly the EG region
                r.witness = detail::region_maximal_path(K, init, r.sat);
            }
            break;
        case FOp::AG:
            if (!r.holds)
                r.witness = detail::forward_path(K, init, ck.ones(), negate(ck.sat(f->a)));
            break;
        case FOp::AF: {
            if (!r.holds) {
                // a maximal path avoiding the target: the EG !psi region is
                // the complement of the AF set
                r.witness = detail::region_maximal_path(K, init, negate(r.sat));
            }
            break;
        }
        case FOp::AU: {
            if (!r.holds) {
                // !A[g U h] = E[!h U (!g & !h)] | EG !h
                std::vector<char> ng = negate(ck.sat(f->a));
                std::vector<char> nh = negate(ck.sat(f->b));
                std::vector<char> both(nh);
                for (size_t s = 0; s < both.size(); ++s) both[s] = both[s] && ng[s];
                r.witness = detail::forward_path(K, init, nh, both);
                if (!r.witness) {
                    std::vector<char> region = negate(ck.eval_au(ck.ones(), ck.sat(f->b)));
                    r.witness = detail::region_maximal_path(K, init, region);
                }
            }
            break;
        }
        default: break;
    }
    return r;
}

// ── formulas about assemblies ──────────────────────────────────────────────

/// Exact-configuration formula: one atom per cell.
inline FormulaPtr shape_formula(const Configuration& c) {
    std::vector<FormulaPtr> parts;
    for (int y = 0; y < c.n; ++y)
        for (int x = 0; x < c.n; ++x) {
            int t = c.at({x, y});
            parts.push_back(f_atom(t < 0 ? 0 : t + 1, x, y));
        }
    return f_all(parts);
}

/// No attachment is possible: the `terminal` macro.
inline FormulaPtr terminal_formula() { return f_not(f_ex(f_true())); }

namespace detail {

/// Disjunction over the minimal binding patterns of tile `m` at `loc`,
/// dropping patterns that reach outside the surface. Returns nullptr when no
/// pattern survives (the tile can never attach at this location).
inline FormulaPtr pattern_antecedent(const TileAssemblySystem& sys, int m, Coord loc, int n) {
    std::vector<FormulaPtr> disjuncts;
    for (const auto& pattern : binding_patterns(sys, m)) {
        std::vector<FormulaPtr> conj;
        bool in_range = true;
        for (const auto& [d, u] : pattern) {
            Coord nbr = step(loc, d);
            if (nbr.x < 0 || nbr.x >= n || nbr.y < 0 || nbr.y >= n) {
                in_range = false;
                break;
            }
            conj.push_back(f_atom(u + 1, nbr.x, nbr.y));
        }
        if (in_range) disjuncts.push_back(f_all(conj));
    }
    if (disjuncts.empty()) return nullptr;
    return f_any(disjuncts);
}

}  // namespace detail

/// The axiom families describing assembly dynamics on an n-by-n surface.
/// Everything except `seed` is AG-wrapped and valid over the reachable model;
/// `seed` describes the initial state only.
struct AxiomSet {
    std::vector<FormulaPtr> permanence;   // a placed tile stays: AG(t -> AG t)
    std::vector<FormulaPtr> exclusivity;  // empty excludes every tile
    std::vector<FormulaPtr> uniqueness;   // at most one tile per cell
    std::vector<FormulaPtr> binding;      // presence implies a binding pattern
    FormulaPtr seed;                      // exact initial configuration
};

inline AxiomSet axioms(const TileAssemblySystem& sys, int n) {
    AxiomSet ax;
    int k = sys.tile_count();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            for (int m = 1; m <= k; ++m) {
                FormulaPtr here = f_atom(m, x, y);
                ax.permanence.push_back(f_ag(f_implies(here, f_ag(here))));
            }
            std::vector<FormulaPtr> occupied;
            for (int m = 1; m <= k; ++m) occupied.push_back(f_atom(m, x, y));
            ax.exclusivity.push_back(
                f_ag(f_implies(f_atom(0, x, y), f_not(f_any(occupied)))));
            std::vector<FormulaPtr> pairwise;
            for (int a = 1; a <= k; ++a)
                for (int b = a + 1; b <= k; ++b)
                    pairwise.push_back(f_not(f_and(f_atom(a, x, y), f_atom(b, x, y))));
            ax.uniqueness.push_back(f_ag(f_all(pairwise)));
        }
    // binding axioms: a tile's presence implies one of its minimal attachment
    // patterns among the (permanent) neighbors -- except where the seed put it
    auto seeded = [&](Coord loc, int tile) {
        for (const auto& [sloc, stile] : sys.seed.cells)
            if (sloc == loc && stile == tile) return true;
        return false;
    };
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            for (int m = 0; m < k; ++m) {
                if (seeded({x, y}, m)) continue;
                FormulaPtr ante = detail::pattern_antecedent(sys, m, {x, y}, n);
                ax.binding.push_back(f_ag(
                    f_implies(f_atom(m + 1, x, y), ante ? ante : f_false())));
            }
    ax.seed = shape_formula(seed_configuration(sys, n));
    return ax;
}

/// One local-determinism formula per (location, tile) with a satisfiable
/// attachment antecedent. A decision point is an EMPTY cell where the tile's
/// binding pattern appears — the emptiness conjunct keeps cells that are
/// already occupied (the seed above all) from registering as spurious
/// competition. At every decision point the tile must eventually occupy the
/// cell, and no competing tile's pattern may hold alongside.
struct LocalDeterminismFormula {
    Coord loc;
    int tile = 0;
    FormulaPtr formula;
};

inline std::vector<LocalDeterminismFormula> local_determinism_formulas(
    const TileAssemblySystem& sys, int n) {
    std::vector<LocalDeterminismFormula> out;
    int k = sys.tile_count();
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            std::vector<FormulaPtr> antecedents(static_cast<size_t>(k));
            for (int m = 0; m < k; ++m) {
                FormulaPtr pattern = detail::pattern_antecedent(sys, m, {x, y}, n);
                if (pattern)
                    antecedents[size_t(m)] = f_and(f_atom(0, x, y), std::move(pattern));
            }
            for (int m = 0; m < k; ++m) {
                if (!antecedents[size_t(m)]) continue;
                std::vector<FormulaPtr> parts{f_af(f_atom(m + 1, x, y))};
                for (int o = 0; o < k; ++o)
                    if (o != m && antecedents[size_t(o)])
                        parts.push_back(f_not(antecedents[size_t(o)]));
                out.push_back({{x, y}, m,
                               f_ag(f_implies(antecedents[size_t(m)], f_all(parts)))});
            }
        }
    return out;
}

// ── unique terminal assembly query ──────────────────────────────────────────

enum class UniqueVerdict { Unique, NonUnique, NotTerminal, SurfaceLimited };

struct UniqueQueryResult {
    UniqueVerdict verdict = UniqueVerdict::Unique;
    int surface = 0;                      // surface size of the decisive model
    std::vector<Configuration> terminals; // 1 for Unique, up to 2 for NonUnique
    std::optional<Coord> escape;          // cell that keeps growth alive
    std::optional<Path> counterexample;   // failed-AF path for a candidate
    size_t states_explored = 0;
};

/// Decide whether the system produces a unique terminal assembly. With a
/// candidate configuration: reject immediately if it is not terminal, else
/// model-check AF(shape) at the seed. Without one: enumerate terminal states;
/// a single in-surface terminal is unique, a single escaping terminal earns
/// one retry on a grown surface before the verdict SurfaceLimited.
inline UniqueQueryResult unique_terminal_assembly_query(
    const TileAssemblySystem& sys, int n, const std::optional<Configuration>& candidate = {},
    size_t state_budget = kDefaultStateBudget) {
    UniqueQueryResult r;
    if (candidate) {
        if (candidate->n != n)
            throw PreconditionError("candidate surface size differs from the query size");
        r.surface = n;
        if (!frontier(sys, *candidate).empty()) {
            r.verdict = UniqueVerdict::NotTerminal;
            return r;
        }
        TransitionSystem ts = build_transition_system(sys, n, state_budget);
        r.states_explored = ts.states.size();
        Kripke k = kripke_of(sys, ts);
        CheckResult cr = check(k, f_af(shape_formula(*candidate)));
        if (cr.holds) {
            r.verdict = UniqueVerdict::Unique;
            r.terminals = {*candidate};
        } else {
            r.verdict = UniqueVerdict::NonUnique;
            r.terminals = {*candidate};
            r.counterexample = cr.witness;
            if (cr.witness && !cr.witness->states.empty())
                r.terminals.push_back(ts.states[size_t(cr.witness->states.back())]);
        }
        return r;
    }

    int cur = n;
    for (int attempt = 0;; ++attempt) {
        TransitionSystem ts = build_transition_system(sys, cur, state_budget);
        r.states_explored = ts.states.size();
        r.surface = cur;
        auto terms = ts.terminal_states();
        if (terms.size() > 1) {
            r.verdict = UniqueVerdict::NonUnique;
            r.terminals = {ts.states[size_t(terms[0])], ts.states[size_t(terms[1])]};
            return r;
        }
        const Configuration& only = ts.states[size_t(terms.at(0))];
        Coord escape{-1, -1};
        if (is_terminal_beyond_surface(sys, only, &escape)) {
            r.verdict = UniqueVerdict::Unique;
            r.terminals = {only};
            r.escape.reset();
            return r;
        }
        r.escape = escape;
        r.terminals = {only};
        if (attempt >= 1) {
            r.verdict = UniqueVerdict::SurfaceLimited;
            return r;
        }
        double grown = double(cur) * std::log2(double(cur) > 1 ? double(cur) : 2.0);
        int next = std::max(cur + 1, std::min(2 * cur, int(std::ceil(grown))));
        cur = next;
    }
}

}  // namespace tascheck
