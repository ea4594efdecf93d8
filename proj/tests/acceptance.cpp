// Acceptance checks for the toolkit, one criterion per line. Each criterion
// prints `criterion N: <what>: pass` or `: FAIL — <first mismatch>`; the exit
// status is the number of failing criteria, so CI can gate on zero.

#include <tascheck/counting.hpp>
#include <tascheck/ctl.hpp>
#include <tascheck/ingest.hpp>
#include <tascheck/petri.hpp>
#include <tascheck/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "path_oracle.hpp"

namespace {

using namespace tascheck;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects the first failure; later expectations are still evaluated so a
/// criterion's cost is the same on red and green runs.
struct Check {
    bool ok = true;
    std::string why;

    void expect(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            why = what;
        }
    }
};

std::string coord_text(Coord c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

std::vector<std::pair<std::string, TileAssemblySystem>> fixture_systems() {
    return {{"sierpinski", fixtures::sierpinski()},
            {"carpet", fixtures::carpet()},
            {"ambiguous", fixtures::ambiguous()},
            {"downgrow", fixtures::downgrow()}};
}

// ── criterion 1: closed form vs diamond vs explicit ─────────────────────────

Check counts_agree() {
    Check c;
    auto start = Clock::now();
    for (int n = 1; n <= 12; ++n)
        c.expect(worst_case_config_count(n) == diamond_enumeration(n).total,
                 "diamond total diverges from the closed form at n=" + std::to_string(n));
    const long anchored[] = {1, 5, 19, 69, 251};
    auto sys = fixtures::sierpinski();
    for (int n = 1; n <= 5; ++n) {
        BigInt states(build_transition_system(sys, n).states.size());
        c.expect(states == anchored[n - 1],
                 "explicit state count at n=" + std::to_string(n) + " is " + states.str() +
                     ", expected " + std::to_string(anchored[n - 1]));
        c.expect(states == worst_case_config_count(n),
                 "explicit state count misses the closed form at n=" + std::to_string(n));
    }
    double t = seconds_since(start);
    c.expect(t < 10.0, "took " + std::to_string(t) + " s, bound is 10 s");
    return c;
}

// ── criterion 2: verification budget ────────────────────────────────────────

Check por_budget() {
    Check c;
    auto sys = fixtures::sierpinski();
    double t200 = 0.0;
    for (int n : {10, 50, 200}) {
        auto start = Clock::now();
        VerificationReport rep = verify(sys, n);
        if (n == 200) t200 = seconds_since(start);
        c.expect(rep.verdict == Verdict::UniqueTerminal,
                 "verdict at n=" + std::to_string(n) + " is " + verdict_name(rep.verdict));
        size_t want = size_t(n) * size_t(n) + size_t(n) - 1;
        c.expect(rep.configurations_evaluated == want,
                 "budget at n=" + std::to_string(n) + " is " +
                     std::to_string(rep.configurations_evaluated) + ", expected " +
                     std::to_string(want));
    }
    c.expect(t200 < 10.0, "n=200 took " + std::to_string(t200) + " s, bound is 10 s");
    return c;
}

// ── criterion 3: three engines, one uniqueness answer ───────────────────────

Check oracle_equivalence() {
    Check c;
    for (const auto& [name, sys] : fixture_systems()) {
        for (int n = 2; n <= 6; ++n) {
            std::string at = name + " n=" + std::to_string(n);
            // Ground truth on the bounded surface: the explicit system's
            // terminal states, cross-checked by the AF(shape) query pointed
            // at one of them and by the token game's dead markings.
            TransitionSystem ts = build_transition_system(sys, n);
            auto terms = ts.terminal_states();
            bool explicit_unique = terms.size() == 1;
            UniqueQueryResult q =
                unique_terminal_assembly_query(sys, n, ts.states[size_t(terms.at(0))]);
            c.expect((q.verdict == UniqueVerdict::Unique) == explicit_unique,
                     "AF(shape) query disagrees with terminal enumeration on " + at);
            PetriExploreResult p = explore(translate(sys, n));
            bool petri_unique = p.terminal_states == 1;
            c.expect(explicit_unique == petri_unique,
                     "explicit system and token game disagree on " + at);
            VerificationReport rep = verify(sys, n);
            switch (rep.verdict) {
                case Verdict::UniqueTerminal:
                    c.expect(explicit_unique && petri_unique,
                             "verify says unique but the explicit engines disagree on " + at);
                    break;
                case Verdict::NonUniqueTerminal:
                    c.expect(!explicit_unique && p.terminal_states >= 2,
                             "verify says non-unique but the explicit engines disagree on " + at);
                    break;
                default:
                    c.expect(name == "downgrow",
                             std::string("unexpected refusal (") + verdict_name(rep.verdict) +
                                 ") on " + at);
                    break;
            }
        }
    }
    return c;
}

// ── criterion 4: marking graph bisimulation ─────────────────────────────────

Check petri_bisimulation() {
    Check c;
    for (const auto& [name, sys] : fixture_systems()) {
        for (int n = 1; n <= 4; ++n) {
            std::string at = name + " n=" + std::to_string(n);
            TransitionSystem ts = build_transition_system(sys, n);
            PetriExploreResult p = explore(translate(sys, n));
            c.expect(p.states == ts.states.size(), "marking count differs on " + at);
            c.expect(p.edges == ts.edge_count(), "firing count differs on " + at);
            c.expect(p.terminal_states == ts.terminal_states().size(),
                     "dead marking count differs on " + at);
        }
    }
    return c;
}

// ── criterion 5: CTL engine vs path-enumeration oracle ──────────────────────

Kripke random_kripke(std::mt19937& rng, int max_states) {
    std::uniform_int_distribution<int> size_dist(1, max_states);
    std::uniform_int_distribution<int> deg_dist(0, 3);
    std::uniform_int_distribution<int> bit_dist(0, 1);
    int v = size_dist(rng);
    std::vector<std::vector<int>> succ(static_cast<size_t>(v));
    std::uniform_int_distribution<int> target(0, v - 1);
    for (auto& out : succ) {
        int deg = deg_dist(rng);
        for (int e = 0; e < deg; ++e) out.push_back(target(rng));
    }
    std::vector<std::vector<char>> bits(3, std::vector<char>(size_t(v)));
    for (auto& column : bits)
        for (auto& b : column) b = char(bit_dist(rng));
    Kripke k;
    k.num_states = v;
    k.initial = 0;
    k.succ = std::move(succ);
    k.label = [bits = std::move(bits)](int s, const Atom& a) {
        return bits[size_t(a.m) % bits.size()][size_t(s)] != 0;
    };
    return k;
}

Check ctl_against_oracle() {
    Check c;
    auto start = Clock::now();
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> atom_dist(0, 2);

    std::function<FormulaPtr(int)> body = [&](int depth) -> FormulaPtr {
        int pick = depth == 0 ? int(rng() % 2) : int(rng() % 12);
        switch (pick) {
            case 0: return f_true();
            case 1: return f_atom(atom_dist(rng), 0, 0);
            case 2: return f_not(body(depth - 1));
            case 3: return f_and(body(depth - 1), body(depth - 1));
            case 4: return f_or(body(depth - 1), body(depth - 1));
            case 5: return f_implies(body(depth - 1), body(depth - 1));
            case 6: return f_ex(body(depth - 1));
            case 7: return f_ax(body(depth - 1));
            case 8: return f_ef(body(depth - 1));
            case 9: return f_af(body(depth - 1));
            case 10: return f_eg(body(depth - 1));
            default:
                return rng() % 2 ? f_eu(body(depth - 1), body(depth - 1))
                                 : f_au(body(depth - 1), body(depth - 1));
        }
    };
    auto top = [&]() -> FormulaPtr {
        switch (rng() % 6) {
            case 0: return f_af(body(3));
            case 1: return f_ag(body(3));
            case 2: return f_ef(body(3));
            case 3: return f_eg(body(3));
            case 4: return f_eu(body(3), body(3));
            default: return f_au(body(3), body(3));
        }
    };

    for (int iter = 0; iter < 1000 && c.ok; ++iter) {
        Kripke k = random_kripke(rng, 200);
        FormulaPtr f = top();
        CheckResult got = check(k, f);
        path_oracle::Oracle oracle(k);
        for (int s = 0; s < k.num_states; ++s)
            c.expect(bool(got.sat[size_t(s)]) == oracle.holds(f, s),
                     "pair " + std::to_string(iter) + ": " + to_text(f) +
                         " disagrees with the oracle at state " + std::to_string(s));
    }

    // The terminal macro labels exactly the deadlock states on every fixture.
    for (const auto& [name, sys] : fixture_systems()) {
        for (int n = 2; n <= 4; ++n) {
            TransitionSystem ts = build_transition_system(sys, n);
            Kripke k = kripke_of(sys, ts);
            CheckResult cr = check(k, terminal_formula());
            for (size_t s = 0; s < ts.states.size(); ++s)
                c.expect(bool(cr.sat[s]) == ts.edges[s].empty(),
                         "terminal macro mislabels state " + std::to_string(s) + " of " + name +
                             " n=" + std::to_string(n));
        }
    }
    c.expect(seconds_since(start) < 60.0, "oracle comparison ran unreasonably long");
    return c;
}

// ── criterion 6: witness replay ─────────────────────────────────────────────

Check witness_replay() {
    Check c;
    std::vector<std::pair<std::string, TileAssemblySystem>> mutants = {
        {"ambiguous", fixtures::ambiguous()},
        {"downgrow", fixtures::downgrow()},
        {"overbind", fixtures::overbind()}};
    for (const auto& [name, sys] : mutants) {
        for (bool strict : {false, true}) {
            for (int n = 2; n <= 5; ++n) {
                std::string at = name + " n=" + std::to_string(n) +
                                 (strict ? " (strict)" : "");
                VerifyOptions opts;
                opts.strict_paper_rectilinearity = strict;
                VerificationReport rep = verify(sys, n, opts);
                std::vector<Configuration> ends;
                for (const auto& w : rep.witnesses) {
                    Configuration run = seed_configuration(sys, n);
                    bool legal = true;
                    for (const auto& step : w.steps) {
                        if (!can_attach(sys, run, step.tile, step.loc)) {
                            legal = false;
                            break;
                        }
                        run.place(step.loc, step.tile);
                    }
                    c.expect(legal, "witness does not replay through can_attach on " + at);
                    ends.push_back(run);
                }
                if (rep.verdict == Verdict::NonUniqueTerminal) {
                    c.expect(ends.size() >= 2, "non-unique verdict without two witnesses on " + at);
                    for (size_t i = 0; i < ends.size(); ++i)
                        for (size_t j = i + 1; j < ends.size(); ++j)
                            c.expect(!(ends[i] == ends[j]),
                                     "witnesses end in the same configuration on " + at);
                }
            }
        }
    }
    return c;
}

// ── criterion 7: local determinism, offline and online ──────────────────────

Check local_determinism() {
    Check c;

    auto sierp = fixtures::sierpinski();
    TransitionSystem ts = build_transition_system(sierp, 3);
    Kripke k = kripke_of(sierp, ts);
    for (const auto& ld : local_determinism_formulas(sierp, 3))
        c.expect(check(k, ld.formula).holds,
                 "formula for " + sierp.tile(ld.tile).name + " at " + coord_text(ld.loc) +
                     " fails on the deterministic system");

    auto amb = fixtures::ambiguous();
    TransitionSystem tsa = build_transition_system(amb, 3);
    Kripke ka = kripke_of(amb, tsa);
    std::vector<Coord> failing;
    for (const auto& ld : local_determinism_formulas(amb, 3))
        if (!check(ka, ld.formula).holds) failing.push_back(ld.loc);
    c.expect(!failing.empty(), "no formula fails on the ambiguous mutant");

    VerificationReport rep = verify(amb, 3);
    c.expect(rep.verdict == Verdict::NonUniqueTerminal,
             std::string("online verdict on the mutant is ") + verdict_name(rep.verdict));
    if (!failing.empty() && rep.location) {
        Coord first = *std::min_element(failing.begin(), failing.end());
        c.expect(first == *rep.location && first == Coord{1, 1},
                 "offline suite first fails at " + coord_text(first) +
                     " but the online check flagged " + coord_text(*rep.location));
    } else {
        c.expect(false, "online check reported no location");
    }

    // Overhead bound: the online check may at most double verify's runtime.
    auto timed = [&](const VerifyOptions& opts) {
        double best = 1e9;
        for (int i = 0; i < 3; ++i) {
            auto start = Clock::now();
            VerificationReport r = verify(sierp, 200, opts);
            best = std::min(best, seconds_since(start));
            c.expect(r.verdict == Verdict::UniqueTerminal, "timing run did not verify");
        }
        return best;
    };
    VerifyOptions without;
    without.local_determinism = false;
    double t_on = timed(VerifyOptions{});
    double t_off = timed(without);
    c.expect(t_on <= 2.0 * t_off + 0.01,
             "online check costs " + std::to_string(t_on) + " s vs " + std::to_string(t_off) +
                 " s without, more than 2x");
    return c;
}

// ── criterion 8: format fidelity ────────────────────────────────────────────

Check format_fidelity() {
    Check c;
    const char* record_text =
        "TILENAME 1+1\n"
        "LABEL\n"
        "NORTHBIND 1\n"
        "EASTBIND 1\n"
        "SOUTHBIND 1\n"
        "WESTBIND 1\n"
        "NORTHLABEL 0\n"
        "EASTLABEL 0\n"
        "SOUTHLABEL 1\n"
        "WESTLABEL 1\n"
        "CREATE\n";
    auto parsed = parse_tileset(record_text);
    c.expect(parsed.ok() && parsed.value->records.size() == 1,
             "the reference tile record does not parse to one tile");
    if (parsed.ok() && parsed.value->records.size() == 1) {
        const TileRecord& r = parsed.value->records[0];
        c.expect(r.name == "1+1", "tile name is '" + r.name + "'");
        c.expect(r.display.empty(), "display label should be empty");
        for (Dir d : all_dirs)
            c.expect(r.binds[size_t(d)] == 1, "bond strengths should all be 1");
        c.expect(r.labels[size_t(Dir::N)] == "0" && r.labels[size_t(Dir::E)] == "0" &&
                     r.labels[size_t(Dir::S)] == "1" && r.labels[size_t(Dir::W)] == "1",
                 "glue labels differ from the reference record");
    }

    std::string exported = export_smart(fixtures::sierpinski(), 50, "SierpTri");
    std::string golden = fixtures::read_file(fixtures::data_path("golden/sierpinski_n50.smart"));
    c.expect(exported == golden, "n=50 model differs from the frozen golden file");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* what;
        std::function<Check()> run;
    };
    const Criterion criteria[] = {
        {"closed form, diamond decoration, and explicit state counts agree", counts_agree},
        {"verification budget is n^2+n-1 at n=10/50/200 with n=200 under 10 s", por_budget},
        {"verify, the explicit query, and the token game give one uniqueness answer",
         oracle_equivalence},
        {"Petri marking graphs match the transition systems state for state",
         petri_bisimulation},
        {"the CTL engine agrees with the path-enumeration oracle on 1000 random pairs",
         ctl_against_oracle},
        {"every emitted witness replays legally and non-unique runs end apart",
         witness_replay},
        {"the local-determinism suite separates the fixtures at the same location under 2x "
         "overhead",
         local_determinism},
        {"the tile record parses exactly and the n=50 model matches its golden file",
         format_fidelity},
    };

    int failures = 0;
    for (size_t i = 0; i < sizeof(criteria) / sizeof(criteria[0]); ++i) {
        Check result = criteria[i].run();
        if (result.ok) {
            std::printf("criterion %zu: %s: pass\n", i + 1, criteria[i].what);
        } else {
            ++failures;
            std::printf("criterion %zu: %s: FAIL — %s\n", i + 1, criteria[i].what,
                        result.why.c_str());
        }
    }
    if (failures == 0)
        std::printf("all 8 criteria pass\n");
    else
        std::printf("%d of 8 criteria fail\n", failures);
    return failures;
}
