#include <algorithm>

#include "distopt/oracle.hpp"
#include "distopt/selection.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace distopt;
using namespace distopt::oracle;

TEST_SUITE("oracle") {

TEST_CASE("kth distance") {
    const PointSet p = testutil::unit_square();
    CHECK(brute_kth(p, 1) == 1.0);
    CHECK(brute_kth(p, 6) == 2.0);
    CHECK_THROWS_AS(brute_kth(p, 0), RankOutOfRange);
    CHECK_THROWS_AS(brute_kth(p, 7), RankOutOfRange);
    const PointSet a({{0, 0}}), b({{1, 0}, {3, 0}});
    CHECK(brute_kth_bipartite(a, b, 2) == 9.0);
    CHECK_THROWS_AS(brute_kth_bipartite(a, b, 3), RankOutOfRange);
    CHECK(all_pair_distances(p) == std::vector<SqDist>{1, 1, 1, 1, 2, 2});
    CHECK(all_cross_distances(a, b) == std::vector<SqDist>{1, 9});
}

TEST_CASE("kth agrees with selection") {
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        const PointSet p = t % 4 == 0 ? testutil::lattice_points(40 + rng.below(80), rng, 5)
                                      : testutil::uniform_points(40 + rng.below(80), rng);
        const auto k = 1 + rng.below(pair_count(p.size()));
        CHECK(brute_kth(p, k) == select_distance(p, k, rng));
    }
}

TEST_CASE("minimum feasible value") {
    CHECK(brute_min_feasible({9, 1, 4}, [](SqDist v) { return v >= 4; }) == 4.0);
    CHECK(brute_min_feasible({5}, [](SqDist v) { return v >= 1; }) == 5.0);
    CHECK_THROWS_AS(brute_min_feasible({1, 2}, [](SqDist v) { return v >= 3; }), NoFeasibleValue);
    Rng rng(2);
    for (int t = 0; t < 50; ++t) {
        std::vector<SqDist> c(1 + rng.below(40));
        for (auto& v : c) v = static_cast<double>(rng.below(30));
        const SqDist th = static_cast<double>(rng.below(29));
        auto dec = [&](SqDist v) { return v >= th; };
        if (*std::max_element(c.begin(), c.end()) < th) continue;
        std::vector<SqDist> s = c;
        std::sort(s.begin(), s.end());
        const SqDist by_search = *std::lower_bound(s.begin(), s.end(), th);
        CHECK(brute_min_feasible(c, dec) == by_search);
    }
}

TEST_CASE("cover check catches each defect") {
    const PointSet a({{0, 0}, {0, 1}});
    const PointSet b({{1, 0}, {5, 0}});
    const SqInterval iv{0.5, 2.0};
    // In range: (0,0) and (1,0).
    BrsOutput good;
    good.gamma.bicliques = {{{0, 1}, {0}}};
    good.pi.bicliques = {{{0}, {1}}};
    auto rep = brute_brs_check(a, b, iv, good);
    CHECK(rep.ok);
    CHECK(rep.in_range == 2);

    BrsOutput dup = good;
    dup.pi.bicliques.push_back({{1}, {0}});
    rep = brute_brs_check(a, b, iv, dup);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.pair.has_value());
    CHECK(*rep.pair == std::pair<PointId, PointId>{1, 0});
    CHECK(rep.message.find("covered twice") != std::string::npos);

    BrsOutput bad_cert;
    bad_cert.gamma.bicliques = {{{0, 1}, {0, 1}}};
    rep = brute_brs_check(a, b, iv, bad_cert);
    CHECK_FALSE(rep.ok);
    CHECK(rep.message.find("out of range") != std::string::npos);

    BrsOutput missing;
    missing.gamma.bicliques = {{{0}, {0}}};
    rep = brute_brs_check(a, b, iv, missing);
    CHECK_FALSE(rep.ok);
    CHECK(*rep.pair == std::pair<PointId, PointId>{1, 0});

    BrsOutput bad_id;
    bad_id.pi.bicliques = {{{0}, {7}}};
    CHECK_FALSE(brute_brs_check(a, b, iv, bad_id).ok);
}

TEST_CASE("cover check passes library output") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const PointSet a = testutil::uniform_points(1 + rng.below(120), rng);
        const PointSet b = testutil::uniform_points(1 + rng.below(120), rng);
        const SqInterval iv{0.05 * rng.unit(), 0.05 + 0.3 * rng.unit()};
        CHECK(brute_brs_check(a, b, iv, partial_brs(a, b, iv, 3.0, rng)).ok);
    }
}

TEST_CASE("frog reachability") {
    const DfdInstance same{PointSequence({{0, 0}, {1, 0}}), PointSequence({{0, 0}, {1, 0}})};
    CHECK(brute_dfd2(same, 1.0));
    CHECK_FALSE(brute_dfd2(same, 0.99));
    CHECK(brute_dfd2_optimum(same) == 1.0);
    const DfdInstance stuck{PointSequence({{0, 0}, {10, 0}}), PointSequence({{0, 1}, {5, 1}, {10, 1}})};
    CHECK_FALSE(brute_dfd1(stuck, 1.0));
    CHECK(brute_dfd1(stuck, 26.0));
    CHECK(brute_dfd1_optimum(stuck) == 26.0);
    CHECK(brute_dfd2_optimum(stuck) <= brute_dfd1_optimum(stuck));
}

TEST_CASE("explicit unit-disk graph") {
    const RspInstance chain3{testutil::chain(10), 0, 9, 3.0, false};
    CHECK_FALSE(brute_udg_decide(chain3, 4.0));
    CHECK(brute_udg_decide(chain3, 9.0));
    CHECK(brute_rsp(chain3) == 9.0);
    CHECK(brute_rsp({testutil::chain(10), 0, 9, 1.0, false}) == 81.0);
    CHECK(brute_udg_decide({testutil::chain(10), 0, 9, 9.0, true}, 1.0));
    CHECK_THROWS_AS(brute_rsp({testutil::chain(10), 0, 9, 0.0, false}), NoFeasibleValue);
}

}
