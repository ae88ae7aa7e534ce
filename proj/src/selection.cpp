#include "distopt/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace distopt {

namespace {

std::uint64_t coincident_pairs(const PointSet& p) {
    std::vector<Point> pts(p.vec());
    std::sort(pts.begin(), pts.end(), [](Point u, Point v) { return u.x != v.x ? u.x < v.x : u.y < v.y; });
    std::uint64_t total = 0;
    std::uint64_t run = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        run = (i > 0 && pts[i] == pts[i - 1]) ? run + 1 : 0;
        total += run;
    }
    return total;
}

struct PointHash {
    std::size_t operator()(Point p) const noexcept {
        const std::size_t h1 = std::hash<double>{}(p.x + 0.0);
        const std::size_t h2 = std::hash<double>{}(p.y + 0.0);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

std::uint64_t coincident_cross_pairs(const PointSet& a, const PointSet& b) {
    std::unordered_map<Point, std::uint64_t, PointHash> counts;
    for (const Point& q : b.points()) ++counts[q];
    std::uint64_t total = 0;
    for (const Point& q : a.points()) {
        const auto it = counts.find(q);
        if (it != counts.end()) total += it->second;
    }
    return total;
}

/// Uniform bucket grid over a point set, cell width at least `w`.
class Grid {
public:
    Grid(const PointSet& p, double w) {
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
        w_ = std::max(w, extent * 1e-9);
        ids_.resize(p.size());
        std::iota(ids_.begin(), ids_.end(), 0);
        std::vector<std::uint64_t> keys(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) keys[i] = key(cell_of(p.points()[i]));
        std::sort(ids_.begin(), ids_.end(), [&](PointId u, PointId v) {
            return keys[static_cast<std::size_t>(u)] < keys[static_cast<std::size_t>(v)];
        });
        cells_.reserve(p.size());
        for (std::size_t i = 0; i < ids_.size();) {
            const std::uint64_t k = keys[static_cast<std::size_t>(ids_[i])];
            std::size_t j = i;
            while (j < ids_.size() && keys[static_cast<std::size_t>(ids_[j])] == k) ++j;
            cells_.emplace(k, std::make_pair(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)));
            i = j;
        }
    }

    std::pair<std::int64_t, std::int64_t> cell_of(Point q) const {
        auto axis = [&](double v) {
            const double c = std::floor(v / w_);
            return static_cast<std::int64_t>(std::clamp(c, -2.0, static_cast<double>(kMax) + 2.0));
        };
        return {axis(q.x - origin_.x), axis(q.y - origin_.y)};
    }

    std::span<const PointId> bucket(std::int64_t cx, std::int64_t cy) const {
        if (cx < 0 || cy < 0 || cx > kMax || cy > kMax) return {};
        const auto it = cells_.find(key({cx, cy}));
        if (it == cells_.end()) return {};
        return std::span<const PointId>(ids_).subspan(it->second.first, it->second.second - it->second.first);
    }

    template <class F>
    void for_each_cell(F&& f) const {
        for (const auto& [k, range] : cells_) {
            f(static_cast<std::int64_t>(k >> 32), static_cast<std::int64_t>(k & 0xffffffffULL),
              std::span<const PointId>(ids_).subspan(range.first, range.second - range.first));
        }
    }

private:
    static constexpr std::int64_t kMax = 0xffffffffLL;
    static std::uint64_t key(std::pair<std::int64_t, std::int64_t> c) {
        return (static_cast<std::uint64_t>(c.first) << 32) | static_cast<std::uint64_t>(c.second);
    }

    Point origin_;
    double w_ = 1.0;
    std::vector<PointId> ids_;
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> cells_;
};

std::uint64_t grid_count(const PointSet& p, SqDist d2) {
    const Grid grid(p, std::sqrt(d2) * (1.0 + 1e-12));
    std::uint64_t total = 0;
    grid.for_each_cell([&](std::int64_t cx, std::int64_t cy, std::span<const PointId> here) {
        for (std::size_t i = 0; i < here.size(); ++i) {
            for (std::size_t j = i + 1; j < here.size(); ++j) {
                if (sq_dist(p[here[i]], p[here[j]]) <= d2) ++total;
            }
        }
        static constexpr int kOff[4][2] = {{1, -1}, {1, 0}, {1, 1}, {0, 1}};
        for (const auto& o : kOff) {
            for (PointId v : grid.bucket(cx + o[0], cy + o[1])) {
                const Point q = p[v];
                for (PointId u : here) {
                    if (sq_dist(p[u], q) <= d2) ++total;
                }
            }
        }
    });
    return total;
}

std::uint64_t grid_cross_count(const PointSet& a, const PointSet& b, SqDist d2) {
    const Grid grid(b, std::sqrt(d2) * (1.0 + 1e-12));
    std::uint64_t total = 0;
    for (const Point& q : a.points()) {
        const auto [cx, cy] = grid.cell_of(q);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (PointId v : grid.bucket(cx + dx, cy + dy)) {
                    if (sq_dist(q, b[v]) <= d2) ++total;
                }
            }
        }
    }
    return total;
}

std::vector<PointId> all_ids(const PointSet& s) {
    std::vector<PointId> ids(s.size());
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

}  // namespace

std::uint64_t count_pairs_at_most(const PointSet& p, SqDist sq_delta, CountStrategy strategy) {
    if (!(sq_delta >= 0.0)) throw InvalidInput("threshold must be non-negative");
    if (p.size() < 2) return 0;
    if (sq_delta == 0.0) return coincident_pairs(p);
    switch (strategy) {
        case CountStrategy::Brute: {
            std::uint64_t total = 0;
            const auto pts = p.points();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    if (sq_dist(pts[i], pts[j]) <= sq_delta) ++total;
                }
            }
            return total;
        }
        case CountStrategy::Grid:
            return grid_count(p, sq_delta);
        case CountStrategy::Brs: {
            Rng rng(0x5eed);
            const CliqueCover cover = complete_brs(p, p, {0.0, sq_delta}, rng);
            return count_edges(cover) / 2 + coincident_pairs(p);
        }
    }
    return 0;
}

std::uint64_t count_cross_pairs_at_most(const PointSet& a, const PointSet& b, SqDist sq_delta,
                                        CountStrategy strategy) {
    if (!(sq_delta >= 0.0)) throw InvalidInput("threshold must be non-negative");
    if (a.empty() || b.empty()) return 0;
    if (sq_delta == 0.0) return coincident_cross_pairs(a, b);
    switch (strategy) {
        case CountStrategy::Brute: {
            std::uint64_t total = 0;
            for (const Point& p : a.points()) {
                for (const Point& q : b.points()) {
                    if (sq_dist(p, q) <= sq_delta) ++total;
                }
            }
            return total;
        }
        case CountStrategy::Grid:
            return a.size() < b.size() ? grid_cross_count(a, b, sq_delta) : grid_cross_count(b, a, sq_delta);
        case CountStrategy::Brs: {
            Rng rng(0x5eed);
            const CliqueCover cover = complete_brs(a, b, {0.0, sq_delta}, rng);
            return count_edges(cover) + coincident_cross_pairs(a, b);
        }
    }
    return 0;
}

bool decide_rank(const PointSet& p, std::uint64_t k, SqDist sq_delta, CountStrategy strategy) {
    if (k < 1 || k > pair_count(p.size())) throw RankOutOfRange("rank outside 1..n(n-1)/2");
    return count_pairs_at_most(p, sq_delta, strategy) >= k;
}

bool has_coincident_cross_pair(const PointSet& a, const PointSet& b) {
    std::unordered_set<Point, PointHash> seen(b.points().begin(), b.points().end());
    for (const Point& q : a.points()) {
        if (seen.count(q)) return true;
    }
    return false;
}

std::vector<WeightedCandidate> build_expander_candidates(const CliqueCover& gamma, int d, Rng& rng,
                                                         const PointSet& a, const PointSet& b) {
    if (d < 4 || d % 2 != 0) throw InvalidInput("expander degree must be even and at least 4");
    std::vector<WeightedCandidate> out;
    std::vector<std::uint32_t> perm;
    std::vector<std::uint64_t> codes;
    for (const Biclique& t : gamma.bicliques) {
        if (t.a_side.empty() || t.b_side.empty()) continue;
        const bool a_large = t.a_side.size() >= t.b_side.size();
        const auto& big = a_large ? t.a_side : t.b_side;
        const auto& small = a_large ? t.b_side : t.a_side;
        const PointSet& big_pts = a_large ? a : b;
        const PointSet& small_pts = a_large ? b : a;
        const std::size_t ns = small.size();
        const std::size_t g = big.size() / ns;
        for (std::size_t i = 0; i < g; ++i) {
            const std::size_t first = i * ns;
            const std::size_t nc = i + 1 == g ? big.size() - first : ns;
            const std::size_t nv = nc + ns;
            const double weight = static_cast<double>(nc) * static_cast<double>(ns) / static_cast<double>(nv);
            perm.resize(nv + (nv % 2));
            codes.clear();
            for (int rep = 0; rep < d / 2; ++rep) {
                std::iota(perm.begin(), perm.end(), 0u);
                rng.shuffle(perm);
                for (std::size_t e = 0; e + 1 < perm.size(); e += 2) {
                    std::uint32_t u = perm[e];
                    std::uint32_t v = perm[e + 1];
                    if (u > v) std::swap(u, v);
                    // Chunk vertices are 0..nc-1, small-side vertices nc..nv-1.
                    if (u < nc && v >= nc && v < nv) codes.push_back(static_cast<std::uint64_t>(u) * ns + (v - nc));
                }
            }
            std::sort(codes.begin(), codes.end());
            codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
            for (std::uint64_t c : codes) {
                const PointId x = big[first + c / ns];
                const PointId y = small[c % ns];
                out.push_back({sq_dist(big_pts[x], small_pts[y]), weight});
            }
        }
    }
    return out;
}

WeightPartition weighted_interval_partition(std::vector<WeightedCandidate> cands, double m_stage,
                                            int d) {
    (void)d;
    WeightPartition part;
    const double quarter = m_stage / 4.0;
    for (const WeightedCandidate& c : cands) {
        if (c.weight > quarter * (1.0 + 1e-12)) {
            throw WeightBoundViolated("candidate weight " + std::to_string(c.weight) +
                                      " exceeds a quarter of the stage weight");
        }
    }
    std::sort(cands.begin(), cands.end(),
              [](const WeightedCandidate& u, const WeightedCandidate& v) { return u.value < v.value; });
    double acc = 0.0;
    SqDist last = 0.0;
    for (std::size_t i = 0; i < cands.size();) {
        // Equal values form one indivisible group.
        const SqDist v = cands[i].value;
        double gw = 0.0;
        for (; i < cands.size() && cands[i].value == v; ++i) gw += cands[i].weight;
        if (acc > 0.0 && acc + gw > 2.0 * quarter) {
            part.bounds.push_back(last);
            part.weights.push_back(acc);
            acc = 0.0;
        }
        acc += gw;
        last = v;
    }
    if (acc > 0.0) {
        if (acc < quarter && !part.bounds.empty()) {
            part.bounds.back() = last;
            part.weights.back() += acc;
        } else {
            part.bounds.push_back(last);
            part.weights.push_back(acc);
        }
    }
    return part;
}

std::vector<SqDist> materialize_in_range(const BrsOutput& out, const PointSet& a, const PointSet& b,
                                         SqInterval iv, bool self_join) {
    std::vector<SqDist> vals;
    auto scan = [&](const CliqueCover& cover) {
        for (const Biclique& t : cover.bicliques) {
            for (PointId x : t.a_side) {
                const Point p = a[x];
                for (PointId y : t.b_side) {
                    if (self_join && !(x < y)) continue;
                    const SqDist v = sq_dist(p, b[y]);
                    if (iv.contains(v)) vals.push_back(v);
                }
            }
        }
    };
    scan(out.gamma);
    scan(out.pi);
    return vals;
}

SqDist run_stages(const StageProblem& pb, Rng& rng, const SelectionConfig& cfg, RunStats* stats) {
    RunStats local;
    RunStats& st = stats ? *stats : local;
    auto decide = [&](SqDist v) {
        ++st.decision_calls;
        return pb.decide(v);
    };
    SqInterval iv{0.0, kInfSq};
    for (int stage = 1;; ++stage) {
        if (stage > pb.max_stages) {
            st.fallback = true;
            BrsOutput all;
            all.pi.bicliques.push_back({all_ids(*pb.a), all_ids(*pb.b)});
            all.refresh_stats();
            return pb.finish(iv, all);
        }
        BrsOutput out = pb.stage_brs(iv, rng);
        st.stages = stage;
        st.gamma_edges += out.stats.gamma_edges;
        st.pi_pairs += out.stats.pi_pairs;
        const double m_stage = static_cast<double>(out.stats.gamma_edges);
        if (m_stage <= pb.threshold || m_stage < 16.0) return pb.finish(iv, out);

        const int calls_before = st.decision_calls;
        const auto cands = build_expander_candidates(out.gamma, cfg.degree, rng, *pb.a, *pb.b);
        const WeightPartition part = weighted_interval_partition(cands, m_stage, cfg.degree);
        // Least boundary accepted by the decision; the answer lies in the
        // bucket ending there.
        std::size_t lo = 0;
        std::size_t hi = part.bounds.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (decide(part.bounds[mid])) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        const SqDist new_lo = lo == 0 ? iv.lo : part.bounds[lo - 1];
        const SqDist new_hi = lo == part.bounds.size() ? iv.hi : part.bounds[lo];
        iv = {new_lo, new_hi};
        st.trace.push_back({iv, stage, pb.k, out.stats.gamma_edges, out.stats.pi_pairs, cands.size(),
                            st.decision_calls - calls_before});
    }
}

SqDist select_distance(const PointSet& p, std::uint64_t k, Rng& rng, const SelectionConfig& cfg,
                       RunStats* stats) {
    const std::uint64_t total = pair_count(p.size());
    if (k < 1 || k > total) throw RankOutOfRange("rank outside 1..n(n-1)/2");
    RunStats local;
    RunStats& st = stats ? *stats : local;
    const std::uint64_t k_zero = count_pairs_at_most(p, 0.0, cfg.strategy);
    ++st.decision_calls;
    if (k_zero >= k) return 0.0;

    const double n = static_cast<double>(p.size());
    StageProblem pb;
    pb.a = &p;
    pb.b = &p;
    pb.self_join = true;
    pb.k = k;
    pb.threshold = cfg.c_thresh * std::pow(n, 4.0 / 3.0) * guarded_log2(n);
    pb.max_stages = static_cast<int>(std::ceil(cfg.c_guard * guarded_log2(n)));
    pb.stage_brs = [&](SqInterval iv, Rng& r) { return partial_brs_selfjoin(p, iv, r, cfg.brs); };
    pb.decide = [&](SqDist v) { return count_pairs_at_most(p, v, cfg.strategy) >= k; };
    pb.finish = [&](SqInterval iv, const BrsOutput& out) {
        std::vector<SqDist> vals = materialize_in_range(out, p, p, iv, true);
        std::uint64_t below = k_zero;
        if (iv.lo > 0.0) {
            below = count_pairs_at_most(p, iv.lo, cfg.strategy);
            ++st.decision_calls;
        }
        const std::uint64_t rank = k - below;
        if (k <= below || rank > vals.size()) {
            throw std::logic_error("selection interval lost the target rank");
        }
        std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(rank - 1), vals.end());
        return vals[rank - 1];
    };
    return run_stages(pb, rng, cfg, &st);
}

SqDist select_distance_bipartite(const PointSet& a, const PointSet& b, std::uint64_t k, Rng& rng,
                                 const SelectionConfig& cfg, RunStats* stats) {
    const std::uint64_t total = static_cast<std::uint64_t>(a.size()) * b.size();
    if (k < 1 || k > total) throw RankOutOfRange("rank outside 1..mn");
    RunStats local;
    RunStats& st = stats ? *stats : local;
    const std::uint64_t k_zero = count_cross_pairs_at_most(a, b, 0.0, cfg.strategy);
    ++st.decision_calls;
    if (k_zero >= k) return 0.0;

    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    StageProblem pb;
    pb.a = &a;
    pb.b = &b;
    pb.k = k;
    pb.threshold = cfg.c_thresh *
                   (std::cbrt(m * m * n * n) + m * guarded_log2(n) + n * guarded_log2(m)) *
                   guarded_log2(m + n);
    pb.max_stages = static_cast<int>(std::ceil(cfg.c_guard * guarded_log2(m + n)));
    pb.stage_brs = [&](SqInterval iv, Rng& r) { return partial_brs_bipartite(a, b, iv, r, cfg.brs); };
    pb.decide = [&](SqDist v) { return count_cross_pairs_at_most(a, b, v, cfg.strategy) >= k; };
    pb.finish = [&](SqInterval iv, const BrsOutput& out) {
        std::vector<SqDist> vals = materialize_in_range(out, a, b, iv, false);
        std::uint64_t below = k_zero;
        if (iv.lo > 0.0) {
            below = count_cross_pairs_at_most(a, b, iv.lo, cfg.strategy);
            ++st.decision_calls;
        }
        const std::uint64_t rank = k - below;
        if (k <= below || rank > vals.size()) {
            throw std::logic_error("selection interval lost the target rank");
        }
        std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(rank - 1), vals.end());
        return vals[rank - 1];
    };
    return run_stages(pb, rng, cfg, &st);
}

}  // namespace distopt
