#include <algorithm>
#include <cmath>
#include <limits>

#include "distopt/core.hpp"
#include "doctest.h"

using namespace distopt;

TEST_SUITE("core") {

TEST_CASE("sq_dist") {
    CHECK(sq_dist({0, 0}, {3, 4}) == 25.0);
    CHECK(sq_dist({1, 1}, {1, 1}) == 0.0);
    CHECK(sq_dist({0, 0}, {1, 1}) == 2.0);
    CHECK(sq_dist({-2, 5}, {1, 1}) == sq_dist({1, 1}, {-2, 5}));
}

TEST_CASE("interval is open below and closed above") {
    const SqInterval i{0.0, 25.0};
    CHECK(interval_contains(i, 25.0));
    CHECK_FALSE(interval_contains(i, 0.0));
    CHECK(interval_contains({4.0, kInfSq}, 5.0));
    CHECK_FALSE(interval_contains({4.0, kInfSq}, 4.0));
    CHECK(interval_contains({4.0, kInfSq}, 1e300));
    CHECK_FALSE(SqInterval{0.0, 0.0}.contains(0.0));
    CHECK(SqInterval{1.0, 2.0}.bounded());
    CHECK_FALSE(SqInterval{}.bounded());
}

TEST_CASE("point set validation") {
    CHECK_THROWS_AS(PointSet({{0, 0}, {std::nan(""), 1}}), InvalidInput);
    CHECK_THROWS_AS(PointSet({{std::numeric_limits<double>::infinity(), 0}}), InvalidInput);
    CHECK_THROWS_AS(PointSequence({}), InvalidInput);
    const PointSet p({{0, 0}, {0, 0}, {2, 3}});
    REQUIRE(p.size() == 3);
    CHECK(p[1] == Point{0, 0});
    CHECK(p[2].y == 3.0);
    CHECK(PointSet().empty());
}

TEST_CASE("rng is reproducible") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng c(7);
    for (int i = 0; i < 1000; ++i) {
        const auto v = c.below(5);
        CHECK(v < 5);
        const double u = c.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
    Rng d(3);
    d.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("numeric helpers") {
    CHECK(pair_count(0) == 0);
    CHECK(pair_count(1) == 0);
    CHECK(pair_count(4) == 6);
    CHECK(pair_count(100000) == 4999950000ULL);
    CHECK(guarded_log2(0.5) == 1.0);
    CHECK(guarded_log2(8.0) == doctest::Approx(3.0));
    const std::vector<Point> pts{{0.5, -7}, {3, 2}};
    CHECK(coordinate_scale(pts) == 7.0);
    CHECK(coordinate_scale(std::vector<Point>{{0.1, 0.2}}) == 1.0);
}

}
