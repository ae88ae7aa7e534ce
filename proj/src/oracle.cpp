#include "distopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace distopt::oracle {

std::vector<SqDist> all_pair_distances(const PointSet& p) {
    std::vector<SqDist> v;
    v.reserve(pair_count(p.size()));
    const auto pts = p.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) v.push_back(sq_dist(pts[i], pts[j]));
    }
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<SqDist> all_cross_distances(const PointSet& a, const PointSet& b) {
    std::vector<SqDist> v;
    v.reserve(a.size() * b.size());
    for (const Point& p : a.points()) {
        for (const Point& q : b.points()) v.push_back(sq_dist(p, q));
    }
    std::sort(v.begin(), v.end());
    return v;
}

SqDist brute_kth(const PointSet& p, std::uint64_t k) {
    if (k < 1 || k > pair_count(p.size())) throw RankOutOfRange("rank outside 1..n(n-1)/2");
    return all_pair_distances(p)[k - 1];
}

SqDist brute_kth_bipartite(const PointSet& a, const PointSet& b, std::uint64_t k) {
    if (k < 1 || k > static_cast<std::uint64_t>(a.size()) * b.size()) {
        throw RankOutOfRange("rank outside 1..mn");
    }
    return all_cross_distances(a, b)[k - 1];
}

SqDist brute_min_feasible(std::vector<SqDist> candidates, const std::function<bool(SqDist)>& decision) {
    std::sort(candidates.begin(), candidates.end());
    for (SqDist v : candidates) {
        if (decision(v)) return v;
    }
    throw NoFeasibleValue("no candidate is feasible");
}

BrsCheckReport brute_brs_check(const PointSet& a, const PointSet& b, SqInterval iv,
                               const CliqueCover& gamma, const CliqueCover& pi) {
    BrsCheckReport rep;
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    std::vector<std::uint8_t> cover(m * n, 0);
    auto fail = [&](std::string msg, PointId x, PointId y) {
        rep.ok = false;
        rep.message = std::move(msg) + " (" + std::to_string(x) + ", " + std::to_string(y) + ")";
        rep.pair = {x, y};
        return rep;
    };
    for (const CliqueCover* c : {&gamma, &pi}) {
        const bool certified = c == &gamma;
        for (const Biclique& t : c->bicliques) {
            for (PointId x : t.a_side) {
                for (PointId y : t.b_side) {
                    if (x < 0 || static_cast<std::size_t>(x) >= m || y < 0 || static_cast<std::size_t>(y) >= n) {
                        return fail("id out of range", x, y);
                    }
                    if (certified && !iv.contains(sq_dist(a[x], b[y]))) {
                        return fail("certified pair out of range", x, y);
                    }
                    std::uint8_t& cnt = cover[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(y)];
                    if (cnt) return fail("pair covered twice", x, y);
                    cnt = 1;
                }
            }
        }
    }
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (!iv.contains(sq_dist(a[static_cast<PointId>(x)], b[static_cast<PointId>(y)]))) continue;
            ++rep.in_range;
            if (!cover[x * n + y]) return fail("in-range pair not covered", static_cast<PointId>(x), static_cast<PointId>(y));
        }
    }
    return rep;
}

BrsCheckReport brute_brs_check(const PointSet& a, const PointSet& b, SqInterval iv, const BrsOutput& out) {
    return brute_brs_check(a, b, iv, out.gamma, out.pi);
}

namespace {

/// BFS over states (i, j); `two_sided` lets the B-frog jump as well.
bool frog_bfs(const DfdInstance& inst, SqDist d2, bool two_sided) {
    const std::size_t m = inst.a_seq.size();
    const std::size_t n = inst.b_seq.size();
    auto ok = [&](std::size_t i, std::size_t j) {
        return sq_dist(inst.a_seq[static_cast<PointId>(i)], inst.b_seq[static_cast<PointId>(j)]) <= d2;
    };
    if (!ok(0, 0)) return false;
    std::vector<char> seen(m * n, 0);
    std::deque<std::pair<std::size_t, std::size_t>> q{{0, 0}};
    seen[0] = 1;
    while (!q.empty()) {
        const auto [i, j] = q.front();
        q.pop_front();
        if (i == m - 1 && j == n - 1) return true;
        auto visit = [&](std::size_t u, std::size_t v) {
            if (!seen[u * n + v] && ok(u, v)) {
                seen[u * n + v] = 1;
                q.emplace_back(u, v);
            }
        };
        for (std::size_t u = i + 1; u < m; ++u) visit(u, j);
        if (two_sided) {
            for (std::size_t v = j + 1; v < n; ++v) visit(i, v);
        } else if (j + 1 < n) {
            visit(i, j + 1);
        }
    }
    return false;
}

SqDist sweep(const DfdInstance& inst, bool two_sided) {
    std::vector<SqDist> c;
    for (const Point& p : inst.a_seq.points()) {
        for (const Point& q : inst.b_seq.points()) c.push_back(sq_dist(p, q));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (SqDist v : c) {
        if (frog_bfs(inst, v, two_sided)) return v;
    }
    throw NoFeasibleValue("no leash length admits a walk");
}

}  // namespace

bool brute_dfd2(const DfdInstance& inst, SqDist d2) { return frog_bfs(inst, d2, true); }
bool brute_dfd1(const DfdInstance& inst, SqDist d2) { return frog_bfs(inst, d2, false); }
SqDist brute_dfd2_optimum(const DfdInstance& inst) { return sweep(inst, true); }
SqDist brute_dfd1_optimum(const DfdInstance& inst) { return sweep(inst, false); }

bool brute_udg_decide(const RspInstance& inst, SqDist d2) {
    const std::size_t n = inst.points.size();
    std::vector<std::vector<std::pair<PointId, double>>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const SqDist v = sq_dist(inst.points[static_cast<PointId>(i)], inst.points[static_cast<PointId>(j)]);
            if (v <= d2) {
                adj[i].emplace_back(static_cast<PointId>(j), std::sqrt(v));
                adj[j].emplace_back(static_cast<PointId>(i), std::sqrt(v));
            }
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    dist[static_cast<std::size_t>(inst.s)] = 0.0;
    if (!inst.weighted) {
        std::deque<PointId> q{inst.s};
        while (!q.empty()) {
            const PointId u = q.front();
            q.pop_front();
            for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
                (void)w;
                if (dist[static_cast<std::size_t>(v)] == inf) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1.0;
                    q.push_back(v);
                }
            }
        }
        return dist[static_cast<std::size_t>(inst.t)] <= std::floor(inst.lambda);
    }
    using Item = std::pair<double, PointId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, inst.s});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
            if (d + w < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = d + w;
                heap.push({d + w, v});
            }
        }
    }
    return dist[static_cast<std::size_t>(inst.t)] <= inst.lambda;
}

SqDist brute_rsp(const RspInstance& inst) {
    std::vector<SqDist> c = all_pair_distances(inst.points);
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::size_t lo = 0;
    std::size_t hi = c.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (brute_udg_decide(inst, c[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if (lo == c.size()) throw NoFeasibleValue("budget unreachable even in the complete graph");
    return c[lo];
}

}  // namespace distopt::oracle
