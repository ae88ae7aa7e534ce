#include <algorithm>

#include "distopt/framework.hpp"
#include "distopt/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace distopt;
using testutil::uniform_points;

TEST_SUITE("framework") {

TEST_CASE("least feasible value") {
    const std::vector<SqDist> v{1, 4, 9};
    int calls = 0;
    CHECK(least_feasible(v, [](SqDist x) { return x >= 4; }, &calls) == 4.0);
    CHECK(calls == 2);
    CHECK(least_feasible(v, [](SqDist) { return true; }) == 1.0);
    CHECK_THROWS_AS(least_feasible(v, [](SqDist) { return false; }), NoFeasibleValue);
    CHECK_THROWS_AS(least_feasible({}, [](SqDist) { return true; }), NoFeasibleValue);
}

TEST_CASE("deterministic framework returns the least feasible realized value") {
    Rng rng(1);
    const PointSet a({{0, 0}});
    const PointSet b({{2, 3}, {1, 1}, {5, 0}});
    CHECK(optimize_deterministic(a, b, [](SqDist v) { return v >= 13; }, rng) == 13.0);
    CHECK(optimize_deterministic(a, b, [](SqDist v) { return v >= 12; }, rng) == 13.0);
    CHECK(optimize_deterministic(a, b, [](SqDist v) { return v >= 0; }, rng) == 2.0);
    CHECK_THROWS_AS(optimize_deterministic(a, b, [](SqDist v) { return v >= 26; }, rng), NoFeasibleValue);
}

TEST_CASE("deterministic framework on a single pair") {
    Rng rng(2);
    const PointSet a({{1, 2}}), b({{4, 6}});
    CHECK(optimize_deterministic(a, b, [](SqDist v) { return v >= 25; }, rng) == 25.0);
    CHECK(optimize_deterministic(a, b, [](SqDist) { return true; }, rng) == 25.0);
}

TEST_CASE("deterministic framework matches bipartite selection") {
    Rng rng(3);
    const PointSet a = uniform_points(150, rng);
    const PointSet b = uniform_points(220, rng);
    const auto d = oracle::all_cross_distances(a, b);
    for (int t = 0; t < 6; ++t) {
        const auto k = 1 + rng.below(d.size());
        auto rank = [&](SqDist v) { return count_cross_pairs_at_most(a, b, v) >= k; };
        OptimizeStats st;
        const SqDist got = optimize_deterministic(a, b, rank, rng, {}, &st);
        CHECK(got == d[k - 1]);
        CHECK(got == select_distance_bipartite(a, b, k, rng));
        CHECK(st.decision_calls > 0);
    }
}

TEST_CASE("deterministic framework with coincident points") {
    Rng rng(4);
    const PointSet a({{0, 0}, {1, 1}});
    const PointSet b({{1, 1}, {3, 3}});
    CHECK(optimize_deterministic(a, b, [](SqDist) { return true; }, rng) == 0.0);
    CHECK(optimize_deterministic(a, b, [](SqDist v) { return v > 0; }, rng) == 2.0);
}

TEST_CASE("shrinking with L at least the pair count") {
    Rng rng(5);
    const PointSet a = uniform_points(10, rng);
    const PointSet b = uniform_points(12, rng);
    const auto r = shrink_interval(a, b, 120.0, [](SqDist v) { return v >= 0.1; }, rng);
    CHECK(r.interval == SqInterval{0.0, kInfSq});
    CHECK(r.claimed_L == 120.0);
    CHECK_FALSE(r.low_confidence);
    CHECK_THROWS_AS(shrink_interval(a, b, 0.5, [](SqDist) { return true; }, rng), InvalidInput);
}

TEST_CASE("shrinking keeps the optimum and few candidates") {
    Rng rng(6);
    const PointSet a = uniform_points(90, rng);
    const PointSet b = uniform_points(110, rng);
    const auto d = oracle::all_cross_distances(a, b);
    int small = 0;
    for (int t = 0; t < 100; ++t) {
        const SqDist target = d[rng.below(d.size())];
        const auto r = shrink_interval(a, b, 8.0, [&](SqDist v) { return v >= target; }, rng);
        CHECK(r.interval.contains(target));
        const auto inside = std::count_if(d.begin(), d.end(), [&](SqDist v) { return r.interval.contains(v); });
        small += inside <= 8 ? 1 : 0;
        for (std::size_t i = 1; i < r.history.size(); ++i) {
            CHECK(r.history[i].lo >= r.history[i - 1].lo);
            CHECK(r.history[i].hi <= r.history[i - 1].hi);
        }
    }
    CHECK(small >= 90);
}

TEST_CASE("randomized framework") {
    Rng rng(7);
    const PointSet a({{0, 0}});
    const PointSet b({{1, 0}, {2, 0}, {3, 0}});
    CHECK(optimize_randomized(a, b, 1.0, [](SqDist v) { return v >= 4; }, rng) == 4.0);
    CHECK(optimize_randomized(a, b, 1.0, [](SqDist v) { return v >= 3.5; }, rng) == 4.0);

    const PointSet c = uniform_points(120, rng);
    const PointSet e = uniform_points(130, rng);
    const auto d = oracle::all_cross_distances(c, e);
    for (double L : {1.0, 16.0, 500.0}) {
        const SqDist target = d[rng.below(d.size())];
        OptimizeStats st;
        CHECK(optimize_randomized(c, e, L, [&](SqDist v) { return v >= target; }, rng, {}, &st) == target);
        REQUIRE(st.shrink_rounds.has_value());
    }
}

TEST_CASE("randomized framework over unordered pairs") {
    Rng rng(8);
    const PointSet p = uniform_points(150, rng);
    const auto d = oracle::all_pair_distances(p);
    for (int t = 0; t < 5; ++t) {
        const auto k = 1 + rng.below(d.size());
        auto rank = [&](SqDist v) { return count_pairs_at_most(p, v) >= k; };
        CHECK(optimize_randomized(p, p, 10.0, rank, rng, {}, nullptr, PairSpace::SelfJoin) == d[k - 1]);
    }
    CHECK_THROWS_AS(optimize_randomized(PointSet({{0, 0}}), PointSet({{0, 0}}), 1.0,
                                        [](SqDist) { return true; }, rng, {}, nullptr, PairSpace::SelfJoin),
                    InvalidInput);
}

TEST_CASE("results do not depend on the seed") {
    const PointSet a = PointSet({{0, 0}, {2, 1}, {5, 5}, {-1, 3}});
    const PointSet b = PointSet({{1, 1}, {4, -2}, {0, 6}});
    auto dec = [](SqDist v) { return v >= 10; };
    const SqDist expect = oracle::brute_min_feasible(oracle::all_cross_distances(a, b), dec);
    for (std::uint64_t s = 0; s < 10; ++s) {
        Rng r1(s), r2(s + 100);
        CHECK(optimize_deterministic(a, b, dec, r1) == expect);
        CHECK(optimize_randomized(a, b, 2.0, dec, r2) == expect);
    }
}

}
