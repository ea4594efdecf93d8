#pragma once
// Worst-case configuration counting for rectilinear, locally deterministic
// systems with a singleton corner seed: a closed-form count, an independent
// diamond-shaped Pascal enumeration, and an explicit recount over the built
// transition system. All three agree on conforming systems; the tests hold
// them against each other.

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "core.hpp"
#include "transition.hpp"
#include "verify.hpp"

namespace tascheck {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt factorial(int k) {
    BigInt f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

/// Closed form 2(2n-1)!/(n!(n-1)!) - 1: the number of distinct reachable
/// configurations when growth fills the whole n x n surface.
inline BigInt worst_case_config_count(int n) {
    if (n < 1) throw PreconditionError("worst_case_config_count needs n >= 1");
    return 2 * factorial(2 * n - 1) / (factorial(n) * factorial(n - 1)) - 1;
}

/// Same value by a second route, for the big-integer cross-check: the central
/// binomial identity C(2n,n) - 1 evaluated multiplicatively.
inline BigInt worst_case_config_count_binomial(int n) {
    if (n < 1) throw PreconditionError("worst_case_config_count needs n >= 1");
    BigInt c = 1;
    for (int i = 1; i <= n; ++i) {
        c *= (n + i);
        c /= i;  // exact at every step: c is a running binomial
    }
    return c - 1;
}

/// The decorated diamond from the counting argument: a root worth 1, two
/// 1-decorated chains of length n-1, and pairwise merge nodes worth the sum of
/// their parents. Summing every decoration counts the reachable
/// configurations one growth frontier at a time.
struct DiamondDecoration {
    std::vector<std::vector<BigInt>> levels;  // levels[d] = decorations at depth d
    BigInt total = 0;
};

/// Recount by brute force: verify the system first (the closed form only
/// speaks about rectilinear, locally deterministic, unique-terminal growth),
/// then enumerate the reachable configurations explicitly.
inline BigInt explicit_config_count(const TileAssemblySystem& sys, int n,
                                    size_t state_budget = kDefaultStateBudget) {
    auto report = verify(sys, n);
    if (report.verdict != Verdict::UniqueTerminal)
        throw PreconditionError(std::string("explicit_config_count needs a verified system, got ") +
                                verdict_name(report.verdict) + ": " + report.detail);
    return BigInt(build_transition_system(sys, n, state_budget).states.size());
}

inline DiamondDecoration diamond_enumeration(int n) {
    if (n < 1) throw PreconditionError("diamond_enumeration needs n >= 1");
    DiamondDecoration out;
    std::vector<BigInt> level{1};
    out.levels.push_back(level);
    out.total = 1;
    for (int depth = 1; depth <= 2 * (n - 1); ++depth) {
        std::vector<BigInt> next;
        bool widening = depth <= n - 1;  // chains still supply 1-decorated ends
        if (widening) {
            next.push_back(1);
            for (size_t i = 0; i + 1 < level.size(); ++i)
                next.push_back(level[i] + level[i + 1]);
            next.push_back(1);
        } else {
            for (size_t i = 0; i + 1 < level.size(); ++i)
                next.push_back(level[i] + level[i + 1]);
        }
        for (const BigInt& v : next) out.total += v;
        out.levels.push_back(next);
        level = std::move(next);
    }
    return out;
}

}  // namespace tascheck
