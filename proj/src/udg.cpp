#include "distopt/udg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <unordered_map>

namespace distopt {

namespace {

/// Grid of mutable buckets; points leave their bucket once settled.
class RemovalGrid {
public:
    RemovalGrid(const PointSet& p, SqDist sq_delta) {
        double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
        double x1 = -x0, y1 = -x0;
        for (const Point& q : p.points()) {
            x0 = std::min(x0, q.x);
            y0 = std::min(y0, q.y);
            x1 = std::max(x1, q.x);
            y1 = std::max(y1, q.y);
        }
        origin_ = {x0, y0};
        const double extent = std::max({x1 - x0, y1 - y0, 1e-300});
        w_ = std::max(std::sqrt(sq_delta) * (1.0 + 1e-12), extent * 1e-9);
        cell_.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            cell_[i] = cell_of(p.points()[i]);
            buckets_[key(cell_[i])].push_back(static_cast<PointId>(i));
        }
    }

    void remove(PointId id) {
        auto& b = buckets_[key(cell_[static_cast<std::size_t>(id)])];
        const auto it = std::find(b.begin(), b.end(), id);
        if (it != b.end()) {
            *it = b.back();
            b.pop_back();
        }
    }

    /// Calls f(v) for every remaining point in the 3x3 block around id's cell;
    /// f returns true to remove v.
    template <class F>
    void scan(PointId id, F&& f) {
        const auto [cx, cy] = cell_[static_cast<std::size_t>(id)];
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                if (cx + dx < 0 || cy + dy < 0) continue;
                const auto it = buckets_.find(key({cx + dx, cy + dy}));
                if (it == buckets_.end()) continue;
                auto& b = it->second;
                for (std::size_t i = 0; i < b.size();) {
                    if (f(b[i])) {
                        b[i] = b.back();
                        b.pop_back();
                    } else {
                        ++i;
                    }
                }
            }
        }
    }

private:
    using Cell = std::pair<std::int64_t, std::int64_t>;
    Cell cell_of(Point q) const {
        return {static_cast<std::int64_t>(std::floor((q.x - origin_.x) / w_)),
                static_cast<std::int64_t>(std::floor((q.y - origin_.y) / w_))};
    }
    static std::uint64_t key(Cell c) {
        return (static_cast<std::uint64_t>(c.first) << 32) | static_cast<std::uint64_t>(c.second);
    }

    Point origin_;
    double w_ = 1.0;
    std::vector<Cell> cell_;
    std::unordered_map<std::uint64_t, std::vector<PointId>> buckets_;
};

}  // namespace

void RspInstance::validate() const {
    const auto n = static_cast<PointId>(points.size());
    if (s < 0 || s >= n || t < 0 || t >= n) throw InvalidInput("endpoint id out of range");
    if (s == t) throw InvalidInput("s and t must differ");
    if (!(lambda >= 0.0)) throw InvalidInput("budget must be non-negative");
}

long RspInstance::hop_budget() const {
    const double cap = static_cast<double>(points.size());
    return static_cast<long>(std::floor(std::min(lambda, cap)));
}

long udg_hops(const PointSet& points, PointId s, PointId t, SqDist sq_delta) {
    RemovalGrid grid(points, sq_delta);
    std::vector<long> dist(points.size(), -1);
    std::deque<PointId> queue{s};
    dist[static_cast<std::size_t>(s)] = 0;
    grid.remove(s);
    while (!queue.empty()) {
        const PointId u = queue.front();
        queue.pop_front();
        if (u == t) break;
        const Point pu = points[u];
        grid.scan(u, [&](PointId v) {
            if (sq_dist(pu, points[v]) > sq_delta) return false;
            dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
            queue.push_back(v);
            return true;
        });
    }
    return dist[static_cast<std::size_t>(t)];
}

double udg_length(const PointSet& points, PointId s, PointId t, SqDist sq_delta) {
    RemovalGrid grid(points, sq_delta);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(points.size(), inf);
    std::vector<char> done(points.size(), 0);
    using Item = std::pair<double, PointId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<std::size_t>(s)] = 0.0;
    heap.push({0.0, s});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        if (u == t) break;
        grid.remove(u);
        const Point pu = points[u];
        grid.scan(u, [&](PointId v) {
            const SqDist d2 = sq_dist(pu, points[v]);
            if (d2 > sq_delta) return false;
            const double nd = d + std::sqrt(d2);
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                heap.push({nd, v});
            }
            return false;
        });
    }
    return dist[static_cast<std::size_t>(t)];
}

bool udg_decide(const RspInstance& inst, SqDist sq_delta) {
    if (!(sq_delta >= 0.0)) throw InvalidInput("threshold must be non-negative");
    if (inst.weighted) return udg_length(inst.points, inst.s, inst.t, sq_delta) <= inst.lambda;
    const long hops = udg_hops(inst.points, inst.s, inst.t, sq_delta);
    return hops >= 0 && hops <= inst.hop_budget();
}

double rsp_L(std::size_t n, bool weighted) {
    const double s = static_cast<double>(n);
    const double lg = guarded_log2(s);
    const double L = weighted ? std::pow(s, 0.4) / std::pow(lg, 0.6) : std::pow(s, 0.4) * std::pow(lg, 1.2);
    return std::max(1.0, L);
}

SqDist rsp(const RspInstance& inst, Rng& rng, const FrameworkConfig& cfg, RunStats* stats) {
    inst.validate();
    return optimize_randomized(
        inst.points, inst.points, rsp_L(inst.points.size(), inst.weighted),
        [&](SqDist v) { return udg_decide(inst, v); }, rng, cfg, stats, PairSpace::SelfJoin);
}

}  // namespace distopt
