#include <algorithm>
#include <cmath>
#include <numeric>

#include "distopt/cuttings.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace distopt;

namespace {

/// Grid and random samples of points inside a cell, clipped to a window.
std::vector<Point> cell_samples(const HierarchicalCutting& hc, int cell_id, Rng& rng, int grid = 24) {
    const CuttingCell& c = hc.cell(cell_id);
    const double x0 = std::max(c.box.x0, -3.0), x1 = std::min(c.box.x1, 8.0);
    const double y0 = std::max(c.box.y0, -3.0), y1 = std::min(c.box.y1, 8.0);
    std::vector<Point> out;
    if (!(x0 < x1) || !(y0 < y1)) return out;
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
            const Point p{x0 + (x1 - x0) * (i + 0.5) / (grid + 1), y0 + (y1 - y0) * (j + 0.5) / (grid + 1)};
            if (hc.contains_point(cell_id, p)) out.push_back(p);
        }
    }
    for (int i = 0; i < 200; ++i) {
        const Point p{x0 + (x1 - x0) * rng.unit(), y0 + (y1 - y0) * rng.unit()};
        if (hc.contains_point(cell_id, p)) out.push_back(p);
    }
    return out;
}

std::vector<BoundaryCircle> random_unit_circles(int n, Rng& rng) {
    std::vector<BoundaryCircle> out;
    for (int i = 0; i < n; ++i) out.push_back({{4 * rng.unit(), 4 * rng.unit()}, 1.0, i, CircleRole::Outer});
    return out;
}

std::vector<Annulus> random_annuli(int n, Rng& rng) {
    std::vector<Annulus> out;
    for (int i = 0; i < n; ++i) {
        const double lo = 0.2 + rng.unit();
        const double hi = lo + 0.1 + rng.unit();
        out.push_back({{4 * rng.unit(), 4 * rng.unit()}, {lo * lo, hi * hi}});
    }
    return out;
}

}  // namespace

TEST_SUITE("cuttings") {

TEST_CASE("circle intersections") {
    auto xs = circle_intersections_x({0, 0}, 1.0, {1, 0}, 1.0);
    REQUIRE(xs.size() == 1);
    CHECK(xs[0] == doctest::Approx(0.5));
    xs = circle_intersections_x({0, 0}, 1.0, {0, 1}, 1.0);
    REQUIRE(xs.size() == 2);
    CHECK(xs[0] == doctest::Approx(-std::sqrt(3.0) / 2));
    CHECK(xs[1] == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(circle_intersections_x({0, 0}, 1.0, {5, 0}, 1.0).empty());
    CHECK(circle_intersections_x({0, 0}, 1.0, {0, 0}, 2.0).empty());
    CHECK(circle_intersections_x({0, 0}, 3.0, {0.5, 0}, 1.0).empty());
    CHECK(circle_intersections_x({0, 0}, 1.0, {2, 0}, 1.0).size() == 1);
}

TEST_CASE("annulus boundary circles") {
    const std::vector<Annulus> an{{{0, 0}, {1.0, 4.0}}, {{1, 1}, {0.0, 9.0}}, {{2, 2}, {4.0, kInfSq}}};
    const auto cs = annulus_circles(an, 0.5);
    REQUIRE(cs.size() == 5);
    CHECK(cs[0].owner == 0);
    CHECK(cs[0].which == CircleRole::Inner);
    CHECK(cs[1].sq_radius == 4.0);
    CHECK(cs[2].sq_radius == doctest::Approx(0.25));
    CHECK(cs[4].owner == 2);
    CHECK(cs[4].which == CircleRole::Inner);
    CHECK(annulus_circles(an, 0.0).size() == 4);
}

TEST_CASE("empty circle set gives the root only") {
    Rng rng(1);
    const auto hc = build_hierarchical_cutting({}, 4.0, rng);
    CHECK(hc.cells().size() == 1);
    CHECK(hc.depth() == 0);
    CHECK(hc.cell(0).conflict.empty());
}

TEST_CASE("r = 1 keeps a single level") {
    Rng rng(1);
    std::vector<BoundaryCircle> cs{{{0, 0}, 1.0, 0, CircleRole::Inner}, {{0, 0}, 4.0, 0, CircleRole::Outer}};
    const auto hc = build_hierarchical_cutting(cs, 1.0, rng);
    CHECK(hc.depth() == 0);
    CHECK(hc.cell(0).conflict == std::vector<int>{0, 1});
    CHECK_THROWS_AS(build_hierarchical_cutting(cs, 0.5, rng), InvalidInput);
    CuttingParams bad;
    bad.rho = 1.0;
    CHECK_THROWS_AS(build_hierarchical_cutting(cs, 4.0, rng, bad), InvalidInput);
}

TEST_CASE("level count is ceil(log_rho r)") {
    Rng rng(2);
    auto cs = random_unit_circles(20, rng);
    CHECK(build_hierarchical_cutting(cs, 8.0, rng).depth() == 3);
    CHECK(build_hierarchical_cutting(cs, 9.0, rng).depth() == 4);
    CuttingParams p;
    p.rho = 4.0;
    CHECK(build_hierarchical_cutting(cs, 16.0, rng, p).depth() == 2);
}

TEST_CASE("conflict lists respect the bound and cover every crossing circle") {
    Rng rng(11);
    const auto cs = random_unit_circles(200, rng);
    const auto hc = build_hierarchical_cutting(cs, 8.0, rng);
    REQUIRE(hc.depth() == 3);
    CHECK(hc.stats().bound_violations == 0);
    for (int level = 0; level <= hc.depth(); ++level) {
        for (int id : hc.levels()[static_cast<std::size_t>(level)]) {
            const CuttingCell& c = hc.cell(id);
            CHECK(c.level == level);
            CHECK(static_cast<double>(c.conflict.size()) <= 4.0 * 200 / std::pow(2.0, level));
            CHECK(std::is_sorted(c.conflict.begin(), c.conflict.end()));
            if (level == 0) continue;
            // A circle separating two sample points of the cell crosses its interior.
            const auto pts = cell_samples(hc, id, rng);
            for (int cid = 0; cid < 200; ++cid) {
                bool inside = false, outside = false;
                for (Point p : pts) {
                    (sq_dist(p, cs[static_cast<std::size_t>(cid)].center) <= 1.0 ? inside : outside) = true;
                }
                if (inside && outside) {
                    CHECK(std::binary_search(c.conflict.begin(), c.conflict.end(), cid));
                }
            }
        }
    }
}

TEST_CASE("each level tiles the plane") {
    Rng rng(5);
    const auto cs = random_unit_circles(40, rng);
    const auto hc = build_hierarchical_cutting(cs, 8.0, rng);
    for (int t = 0; t < 300; ++t) {
        const Point p{-1 + 6 * rng.unit(), -1 + 6 * rng.unit()};
        for (const auto& level : hc.levels()) {
            int hits = 0;
            for (int id : level) hits += hc.contains_point(id, p) ? 1 : 0;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("single point lands in the root") {
    Rng rng(1);
    auto hc = build_hierarchical_cutting({}, 1.0, rng);
    locate_points(hc, PointSet({{0.3, 0.4}}), false);
    CHECK(hc.cell(0).canonical_b == std::vector<PointId>{0});
}

TEST_CASE("located points sit in one cell per level") {
    Rng rng(8);
    const auto cs = random_unit_circles(60, rng);
    auto hc = build_hierarchical_cutting(cs, 8.0, rng);
    const PointSet pts = testutil::uniform_points(500, rng, 4.0);
    locate_points(hc, pts, true);
    std::size_t total = 0;
    std::vector<int> seen(pts.size(), 0);
    for (std::size_t id = 0; id < hc.cells().size(); ++id) {
        const auto& cb = hc.cells()[id].canonical_b;
        total += cb.size();
        CHECK(std::is_sorted(cb.begin(), cb.end()));
        for (PointId q : cb) {
            CHECK(hc.contains_point(static_cast<int>(id), pts[q]));
            ++seen[static_cast<std::size_t>(q)];
        }
    }
    CHECK(total == pts.size() * static_cast<std::size_t>(hc.depth() + 1));
    for (int s : seen) CHECK(s == hc.depth() + 1);
}

TEST_CASE("lattice points on tangent circles are located exactly") {
    Rng rng(15);
    std::vector<Annulus> an;
    std::vector<Point> grid;
    for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y) {
            grid.push_back({double(x), double(y)});
            an.push_back({{double(x), double(y)}, {1.0, 25.0}});
        }
    }
    const PointSet pts(grid);
    for (double r : {2.0, 4.0, 8.0}) {
        auto hc = build_hierarchical_cutting(annulus_circles(an, 0.0), r, rng);
        locate_points(hc, pts, true);
        for (std::size_t id = 0; id < hc.cells().size(); ++id) {
            for (PointId q : hc.cells()[id].canonical_b) CHECK(hc.contains_point(static_cast<int>(id), pts[q]));
        }
    }
}

TEST_CASE("root never contains a finite annulus") {
    Rng rng(3);
    const std::vector<Annulus> an{{{0, 0}, {1.0, 4.0}}};
    auto hc = build_hierarchical_cutting(annulus_circles(an, 0.0), 4.0, rng);
    compute_contained_annuli(hc, an);
    CHECK(hc.cell(0).contained_a.empty());
    CHECK_FALSE(annulus_contains_cell(hc, 0, an[0], 0));
}

TEST_CASE("wide annulus is reported at its first contained cells") {
    Rng rng(4);
    std::vector<Annulus> an{{{2, 2}, {1.0, 9.0}}};
    for (const Annulus& a : random_annuli(12, rng)) an.push_back(a);
    auto hc = build_hierarchical_cutting(annulus_circles(an, 0.0), 4.0, rng);
    compute_contained_annuli(hc, an);
    int reported = 0;
    for (std::size_t id = 1; id < hc.cells().size(); ++id) {
        const CuttingCell& c = hc.cells()[id];
        const bool here = annulus_contains_cell(hc, 0, an[0], static_cast<int>(id));
        const bool up = annulus_contains_cell(hc, 0, an[0], c.parent);
        const bool listed = std::find(c.contained_a.begin(), c.contained_a.end(), 0) != c.contained_a.end();
        CHECK(listed == (here && !up));
        reported += listed ? 1 : 0;
    }
    CHECK(reported > 0);
}

TEST_CASE("contained annuli match the definition and dense sampling") {
    Rng rng(21);
    const auto an = random_annuli(100, rng);
    auto hc = build_hierarchical_cutting(annulus_circles(an, 0.0), 8.0, rng);
    REQUIRE(hc.depth() == 3);
    compute_contained_annuli(hc, an);
    for (std::size_t id = 1; id < hc.cells().size(); ++id) {
        const CuttingCell& c = hc.cells()[id];
        std::vector<int> expect;
        for (int a = 0; a < 100; ++a) {
            const Annulus& ann = an[static_cast<std::size_t>(a)];
            if (annulus_contains_cell(hc, a, ann, static_cast<int>(id)) &&
                !annulus_contains_cell(hc, a, ann, c.parent)) {
                expect.push_back(a);
            }
        }
        CHECK(c.contained_a == expect);
        if (c.contained_a.empty()) continue;
        const auto pts = cell_samples(hc, static_cast<int>(id), rng, 10);
        for (int a : c.contained_a) {
            for (Point p : pts) CHECK(an[static_cast<std::size_t>(a)].contains(p));
        }
    }
}

TEST_CASE("containment agrees with sampling") {
    Rng rng(31);
    const auto an = random_annuli(30, rng);
    auto hc = build_hierarchical_cutting(annulus_circles(an, 0.0), 8.0, rng);
    int checked_in = 0;
    for (std::size_t id = 1; id < hc.cells().size(); id += 3) {
        const auto pts = cell_samples(hc, static_cast<int>(id), rng, 30);
        if (pts.empty()) continue;
        for (int a = 0; a < 30; ++a) {
            const Annulus& ann = an[static_cast<std::size_t>(a)];
            bool any_in = false, any_out = false;
            for (Point p : pts) (ann.contains(p) ? any_in : any_out) = true;
            if (annulus_contains_cell(hc, a, ann, static_cast<int>(id))) {
                CHECK_FALSE(any_out);
                ++checked_in;
            } else if (any_in && any_out) {
                // Mixed samples: some boundary circle must be in conflict.
                const auto& cf = hc.cell(static_cast<int>(id)).conflict;
                bool listed = false;
                for (int cid : hc.circles_of(a)) listed = listed || std::binary_search(cf.begin(), cf.end(), cid);
                CHECK(listed);
            }
        }
    }
    CHECK(checked_in > 0);
}

}
