#include <tascheck/transition.hpp>
#include <tascheck/verify.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"

using namespace tascheck;

namespace {

VerifyOptions strict_mode() {
    VerifyOptions o;
    o.strict_paper_rectilinearity = true;
    return o;
}

using fixtures::overbind;

/// Mirror of the downgrow mutant: a row tile whose strength-2 glue points
/// north from (1,0), offering column-style growth off the left column.
TileAssemblySystem rowgrow() {
    using fixtures::make_tile;
    TileAssemblySystem sys;
    sys.tiles.push_back(make_tile("S", {}, {"H", 2}, {}, {}));
    sys.tiles.push_back(make_tile("R1", {"E", 2}, {}, {}, {"H", 2}));
    fixtures::seed_at_origin(sys, "S");
    return sys;
}

TileAssemblySystem domino(bool explicit_relation) {
    using fixtures::make_tile;
    TileAssemblySystem sys;
    sys.tiles.push_back(make_tile("P", {}, {"x", 2}, {}, {}));
    sys.tiles.push_back(make_tile("Q", {}, {}, {}, {"x", 2}));
    if (explicit_relation) {
        sys.relation.diagonal = false;
        sys.relation.add_pair("x", "x");
    }
    sys.seed.cells = {{{0, 0}, 0}, {{1, 0}, 1}};
    return sys;
}

TileAssemblySystem block_seed() {
    using fixtures::make_tile;
    TileAssemblySystem sys;
    sys.tiles.push_back(make_tile("K", {}, {}, {}, {}));
    sys.seed.cells = {{{0, 0}, 0}, {{0, 1}, 0}, {{1, 0}, 0}, {{1, 1}, 0}};
    return sys;
}

size_t closed_form_budget(int n) { return size_t(n) * size_t(n) + size_t(n) - 1; }

}  // namespace

TEST_CASE("sierpinski verifies unique with the exact configuration budget") {
    auto sys = fixtures::sierpinski();
    for (bool strict : {false, true}) {
        VerifyOptions opt;
        opt.strict_paper_rectilinearity = strict;
        for (int n : {1, 2, 3, 4, 10, 50}) {
            auto report = verify(sys, n, opt);
            INFO("n=" << n << " strict=" << strict);
            REQUIRE(report.verdict == Verdict::UniqueTerminal);
            REQUIRE(report.configurations_evaluated == closed_form_budget(n));
            REQUIRE(report.witnesses.empty());
            REQUIRE(report.surface == n);
            REQUIRE(report.terminal.has_value());
            size_t occupied = 0;
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x)
                    if (report.terminal->occupied({x, y})) ++occupied;
            REQUIRE(occupied == size_t(n) * size_t(n));
        }
    }

    auto report = verify(sys, 2);
    REQUIRE(report.terminal->at({0, 0}) == sys.tile_index("S"));
    REQUIRE(report.terminal->at({0, 1}) == sys.tile_index("L"));
    REQUIRE(report.terminal->at({1, 0}) == sys.tile_index("B"));
    REQUIRE(report.terminal->at({1, 1}) == sys.tile_index("1+1"));
}

TEST_CASE("carpet verifies unique with the exact configuration budget") {
    auto sys = fixtures::carpet();
    for (bool strict : {false, true}) {
        VerifyOptions opt;
        opt.strict_paper_rectilinearity = strict;
        for (int n : {2, 3, 4, 10}) {
            auto report = verify(sys, n, opt);
            INFO("n=" << n << " strict=" << strict);
            REQUIRE(report.verdict == Verdict::UniqueTerminal);
            REQUIRE(report.configurations_evaluated == closed_form_budget(n));
            REQUIRE(report.terminal.has_value());
        }
    }
}

TEST_CASE("the verified terminal matches the explicit state space") {
    for (const auto& sys : {fixtures::sierpinski(), fixtures::carpet()}) {
        for (int n : {2, 3}) {
            auto report = verify(sys, n);
            auto ts = build_transition_system(sys, n);
            auto terminals = ts.terminal_states();
            INFO("n=" << n);
            REQUIRE(terminals.size() == 1);
            REQUIRE(ts.states[size_t(terminals[0])] == *report.terminal);
        }
    }
}

TEST_CASE("the ambiguous system is non-unique with two replayable witnesses") {
    auto sys = fixtures::ambiguous();
    const Coord decision{1, 1};

    for (int n : {2, 3}) {
        auto report = verify(sys, n);
        INFO("n=" << n);
        REQUIRE(report.verdict == Verdict::NonUniqueTerminal);
        REQUIRE(report.location == decision);
        // seed, region-1 configurations 1 and 2, the column/row arms, then
        // the corner probe that finds the competitors
        REQUIRE(report.configurations_evaluated == (n == 2 ? 4u : 6u));
        REQUIRE(report.witnesses.size() == 2);

        std::vector<Configuration> finals;
        for (const auto& w : report.witnesses) {
            Configuration end = replay(sys, n, w.steps);
            REQUIRE(frontier(sys, end).empty());
            finals.push_back(std::move(end));
        }
        REQUIRE(finals[0].at(decision) != finals[1].at(decision));
        std::set<int> decided{finals[0].at(decision), finals[1].at(decision)};
        std::set<int> expected{sys.tile_index("1+1"), sys.tile_index("1+1b")};
        REQUIRE(decided == expected);
    }

    // at n=2 the two witness terminals are exactly the explicit ones
    auto report = verify(sys, 2);
    auto ts = build_transition_system(sys, 2);
    std::vector<Configuration> explicit_terminals;
    for (int t : ts.terminal_states()) explicit_terminals.push_back(ts.states[size_t(t)]);
    REQUIRE(explicit_terminals.size() == 2);
    for (const auto& w : report.witnesses) {
        Configuration end = replay(sys, 2, w.steps);
        bool found = end == explicit_terminals[0] || end == explicit_terminals[1];
        REQUIRE(found);
    }
}

TEST_CASE("downward growth is rejected in both rectilinearity modes") {
    auto sys = fixtures::downgrow();

    SECTION("default mode flags the exposed east glue at placement") {
        auto report = verify(sys, 3);
        REQUIRE(report.verdict == Verdict::NotRectilinear);
        REQUIRE(report.location == Coord{0, 1});
        REQUIRE(report.detail.find("east glue off the bottom row") != std::string::npos);
        REQUIRE(report.configurations_evaluated == 2);
        REQUIRE(report.witnesses.size() == 1);
        REQUIRE(report.witnesses[0].steps.size() == 1);
        REQUIRE_NOTHROW(replay(sys, 3, report.witnesses[0].steps));
    }

    SECTION("strict mode catches the lone-west-precursor corner attachment") {
        auto report = verify(sys, 3, strict_mode());
        REQUIRE(report.verdict == Verdict::NotRectilinear);
        REQUIRE(report.location == Coord{1, 1});
        REQUIRE(report.detail.find("only the west precursor") != std::string::npos);
        REQUIRE(report.configurations_evaluated == 2);
        REQUIRE(report.witnesses.size() == 1);
        // witness: U at (0,1), then D attaching at the corner
        REQUIRE(report.witnesses[0].steps.size() == 2);
        Configuration end = replay(sys, 3, report.witnesses[0].steps);
        REQUIRE(end.at({1, 1}) == sys.tile_index("D"));
    }

    SECTION("the explicit state space still has one terminal: rectilinearity is a separate property") {
        auto ts = build_transition_system(sys, 3);
        REQUIRE(ts.terminal_states().size() == 1);
    }
}

TEST_CASE("a north-facing strength-2 glue off the left column is rejected") {
    auto sys = rowgrow();
    for (bool strict : {false, true}) {
        VerifyOptions opt;
        opt.strict_paper_rectilinearity = strict;
        auto report = verify(sys, 2, opt);
        INFO("strict=" << strict);
        REQUIRE(report.verdict == Verdict::NotRectilinear);
        REQUIRE(report.location == Coord{1, 0});
        REQUIRE(report.detail.find("north glue off the left column") != std::string::npos);
        REQUIRE(report.witnesses.size() == 1);
        REQUIRE_NOTHROW(replay(sys, 2, report.witnesses[0].steps));
    }
}

TEST_CASE("over-binding attachments fail the online local-determinism check") {
    auto sys = overbind();

    SECTION("strict mode reaches the strength-3 attachment") {
        auto report = verify(sys, 4, strict_mode());
        REQUIRE(report.verdict == Verdict::NotLocallyDeterministic);
        REQUIRE(report.location == Coord{1, 2});
        REQUIRE(report.detail.find("strength 3") != std::string::npos);
        REQUIRE(report.configurations_evaluated == 10);
        REQUIRE(report.witnesses.size() == 1);
        // over-binding is still a legal attachment, so the witness replays
        Configuration end = replay(sys, 4, report.witnesses[0].steps);
        REQUIRE(end.at({1, 2}) == sys.tile_index("R"));
    }

    SECTION("default mode already rejects the exposed east glue on the column") {
        auto report = verify(sys, 4);
        REQUIRE(report.verdict == Verdict::NotRectilinear);
        REQUIRE(report.location == Coord{0, 2});
        REQUIRE(report.detail.find("east glue off the bottom row") != std::string::npos);
    }

    SECTION("with the check disabled the partial growth is confirmed unique") {
        VerifyOptions opt = strict_mode();
        opt.local_determinism = false;
        auto report = verify(sys, 4, opt);
        REQUIRE(report.verdict == Verdict::UniqueTerminal);
        REQUIRE(report.configurations_evaluated == closed_form_budget(4));
        size_t occupied = 0;
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                if (report.terminal->occupied({x, y})) ++occupied;
        REQUIRE(occupied == 9);
    }
}

TEST_CASE("local determinism online flags competitors and over-binding directly") {
    auto amb = fixtures::ambiguous();
    Configuration c = seed_configuration(amb, 2);
    c.place({0, 1}, amb.tile_index("L"));
    c.place({1, 0}, amb.tile_index("B"));

    AttachmentStep step{{1, 1}, amb.tile_index("1+1")};
    auto cands = candidates_at(amb, c, {1, 1});
    REQUIRE(cands.size() == 2);

    SECTION("with precomputed candidates") {
        auto r = local_determinism_online(amb, c, step, &cands);
        REQUIRE_FALSE(r.ok);
        REQUIRE(r.competitors == std::vector<int>{amb.tile_index("1+1b")});
        REQUIRE(r.reason.find("competes") != std::string::npos);
    }
    SECTION("enumerating candidates itself") {
        auto r = local_determinism_online(amb, c, step);
        REQUIRE_FALSE(r.ok);
        REQUIRE(r.competitors == std::vector<int>{amb.tile_index("1+1b")});
    }
    SECTION("the plain system passes the same placement") {
        auto sier = fixtures::sierpinski();
        Configuration sc = seed_configuration(sier, 2);
        sc.place({0, 1}, sier.tile_index("L"));
        sc.place({1, 0}, sier.tile_index("B"));
        auto r = local_determinism_online(sier, sc, {{1, 1}, sier.tile_index("1+1")});
        REQUIRE(r.ok);
    }
    SECTION("a third neighbor pushes the binding strength to 3") {
        auto sys = fixtures::sierpinski();
        sys.tiles.push_back(fixtures::make_tile("Tn", {}, {}, {"0", 1}, {}));
        Configuration sc = seed_configuration(sys, 3);
        sc.place({0, 1}, sys.tile_index("L"));
        sc.place({1, 0}, sys.tile_index("B"));
        sc.place({1, 2}, sys.tile_index("Tn"));
        auto r = local_determinism_online(sys, sc, {{1, 1}, sys.tile_index("1+1")});
        REQUIRE_FALSE(r.ok);
        REQUIRE(r.reason.find("strength 3") != std::string::npos);
    }
}

TEST_CASE("rectilinearity check catches binding through north or east faces") {
    auto sys = fixtures::sierpinski();
    sys.tiles.push_back(fixtures::make_tile("Tn", {}, {}, {"0", 1}, {}));
    sys.tiles.push_back(fixtures::make_tile("Tw", {}, {}, {}, {"0", 1}));

    SECTION("north face") {
        Configuration c = seed_configuration(sys, 3);
        c.place({0, 1}, sys.tile_index("L"));
        c.place({1, 0}, sys.tile_index("B"));
        c.place({1, 2}, sys.tile_index("Tn"));
        c.place({1, 1}, sys.tile_index("1+1"));
        auto v = rectilinearity_check(sys, c, {{1, 1}, sys.tile_index("1+1")});
        REQUIRE(v.has_value());
        REQUIRE(v->reason.find("binds through its own north face") != std::string::npos);
    }
    SECTION("east face") {
        Configuration c = seed_configuration(sys, 3);
        c.place({0, 1}, sys.tile_index("L"));
        c.place({1, 0}, sys.tile_index("B"));
        c.place({2, 1}, sys.tile_index("Tw"));
        c.place({1, 1}, sys.tile_index("1+1"));
        auto v = rectilinearity_check(sys, c, {{1, 1}, sys.tile_index("1+1")});
        REQUIRE(v.has_value());
        REQUIRE(v->reason.find("binds through its own east face") != std::string::npos);
    }
    SECTION("a mid-surface tile with an exposed strength-2 north glue") {
        auto dg = fixtures::downgrow();
        Configuration c = seed_configuration(dg, 3);
        c.place({0, 1}, dg.tile_index("U"));
        c.place({1, 1}, dg.tile_index("D"));
        auto v = rectilinearity_check(dg, c, {{1, 1}, dg.tile_index("D")}, true);
        REQUIRE(v.has_value());
        REQUIRE(v->reason.find("north glue off the left column") != std::string::npos);
    }
    SECTION("an attached lateral glue is not an exposure") {
        auto dg = fixtures::downgrow();
        Configuration c = seed_configuration(dg, 3);
        c.place({0, 1}, dg.tile_index("U"));
        c.place({1, 1}, dg.tile_index("D"));
        // strict mode looks west: D's west glue faces the occupied U cell,
        // so only the north exposure remains
        auto v = detail::exposure_violation(dg, c, {1, 1}, true);
        REQUIRE(v.has_value());
        REQUIRE(v->reason.find("north") != std::string::npos);
    }
}

TEST_CASE("a seed tile is checked for exposures before any growth") {
    TileAssemblySystem sys;
    sys.tiles.push_back(fixtures::make_tile("K2", {"V", 2}, {}, {}, {}));
    sys.seed.cells = {{{1, 1}, 0}};
    auto report = verify(sys, 3);
    REQUIRE(report.verdict == Verdict::NotRectilinear);
    REQUIRE(report.location == Coord{1, 1});
    REQUIRE(report.configurations_evaluated == 1);
    REQUIRE(report.witnesses.size() == 1);
    REQUIRE(report.witnesses[0].steps.empty());
}

TEST_CASE("multi-tile seeds are rejected by default and re-encodable by option") {
    for (bool explicit_rel : {false, true}) {
        auto sys = domino(explicit_rel);
        INFO("explicit relation: " << explicit_rel);
        REQUIRE_THROWS_AS(verify(sys, 2), SeedNotSingleton);

        auto re = reencode_seed(sys);
        REQUIRE(re.tile_count() == 4);
        REQUIRE(re.seed.singleton());
        REQUIRE(re.seed.cells[0].first == Coord{0, 0});
        int root = re.seed.cells[0].second;
        REQUIRE(re.tile(root).name == "P~seed0");
        REQUIRE(re.tile(root).side(Dir::E).label == "~seed1");
        REQUIRE(re.tile(root).side(Dir::E).strength == 2);
        int child = re.tile_index("Q~seed1");
        REQUIRE(child >= 0);
        REQUIRE(re.tile(child).side(Dir::W).label == "~seed1");

        VerifyOptions opt;
        opt.reencode_multi_tile_seed = true;
        auto report = verify(sys, 2, opt);
        REQUIRE(report.verdict == Verdict::UniqueTerminal);
        REQUIRE(report.configurations_evaluated == closed_form_budget(2));
        REQUIRE(report.terminal->occupied({0, 0}));
        REQUIRE(report.terminal->occupied({1, 0}));
        REQUIRE_FALSE(report.terminal->occupied({0, 1}));
        REQUIRE_FALSE(report.terminal->occupied({1, 1}));
    }

    SECTION("a disconnected seed cannot be re-encoded") {
        auto sys = domino(false);
        sys.seed.cells = {{{0, 0}, 0}, {{2, 0}, 1}};
        REQUIRE_THROWS_AS(reencode_seed(sys), PreconditionError);
    }
}

TEST_CASE("a block seed re-encoding is honestly flagged as non-rectilinear") {
    // the spanning tree has to route one chain through (1,0) upward, and the
    // fresh strength-2 glue pointing north off the left column is exactly
    // what rectilinear form forbids
    auto sys = block_seed();
    for (bool strict : {false, true}) {
        VerifyOptions opt;
        opt.strict_paper_rectilinearity = strict;
        opt.reencode_multi_tile_seed = true;
        auto report = verify(sys, 2, opt);
        INFO("strict=" << strict);
        REQUIRE(report.verdict == Verdict::NotRectilinear);
        REQUIRE(report.location == Coord{1, 0});
        REQUIRE(report.detail.find("north glue off the left column") != std::string::npos);
    }
}

TEST_CASE("the evaluation budget follows the closed form across sizes") {
    auto sys = fixtures::sierpinski();
    for (int n = 2; n <= 12; ++n) {
        auto report = verify(sys, n);
        INFO("n=" << n);
        REQUIRE(report.verdict == Verdict::UniqueTerminal);
        REQUIRE(report.configurations_evaluated == closed_form_budget(n));
    }
}
