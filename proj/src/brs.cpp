#include "distopt/brs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace distopt {

namespace {

struct Groups {
    std::vector<Point> centers;
    std::vector<std::vector<PointId>> members;
};

/// Buckets ids by identical coordinates; members come out in ascending id order.
Groups group_by_coordinate(const PointSet& s, std::span<const PointId> ids) {
    std::vector<PointId> order(ids.begin(), ids.end());
    std::sort(order.begin(), order.end(), [&](PointId a, PointId b) {
        const Point& p = s[a];
        const Point& q = s[b];
        if (p.x != q.x) return p.x < q.x;
        if (p.y != q.y) return p.y < q.y;
        return a < b;
    });
    Groups g;
    for (PointId id : order) {
        if (g.centers.empty() || !(g.centers.back() == s[id])) {
            g.centers.push_back(s[id]);
            g.members.emplace_back();
        }
        g.members.back().push_back(id);
    }
    return g;
}

std::vector<PointId> all_ids(const PointSet& s) {
    std::vector<PointId> ids(s.size());
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

bool empty_interval(SqInterval iv) { return !(iv.lo < iv.hi); }

double band_margin(const PointSet& a, const PointSet& b, SqInterval iv) {
    double s = std::max(coordinate_scale(a.points()), coordinate_scale(b.points()));
    s = std::max(s, std::sqrt(iv.lo));
    if (iv.bounded()) s = std::max(s, std::sqrt(iv.hi));
    return 1e-9 * s;
}

void flip(std::vector<Biclique>& v) {
    for (Biclique& b : v) std::swap(b.a_side, b.b_side);
}

void append(std::vector<Biclique>& dst, std::vector<Biclique>&& src) {
    dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

struct Round {
    std::vector<Biclique> gamma;  ///< oriented (centers, located)
    std::vector<Biclique> sub;
};

/// One application of the cutting step: annuli around the distinct points of
/// x_ids, the points of y_ids located in the hierarchical cutting.
Round cutting_round(const PointSet& xs, std::span<const PointId> x_ids, const PointSet& ys,
                    std::span<const PointId> y_ids, SqInterval iv, double r, double margin,
                    Rng& rng, const BrsConfig& cfg) {
    Round out;
    if (x_ids.empty() || y_ids.empty()) return out;
    if (static_cast<std::uint64_t>(x_ids.size()) * y_ids.size() <= cfg.leaf_cutoff) {
        // Too small for a cutting to pay off: classify the block directly.
        std::size_t hits = 0;
        for (PointId x : x_ids) {
            for (PointId y : y_ids) hits += iv.contains(sq_dist(xs[x], ys[y])) ? 1 : 0;
        }
        if (hits == 0) return out;
        Biclique whole{{x_ids.begin(), x_ids.end()}, {y_ids.begin(), y_ids.end()}};
        if (cfg.preserve_order) {
            std::sort(whole.a_side.begin(), whole.a_side.end());
            std::sort(whole.b_side.begin(), whole.b_side.end());
        }
        (hits == x_ids.size() * y_ids.size() ? out.gamma : out.sub).push_back(std::move(whole));
        return out;
    }
    Groups g = group_by_coordinate(xs, x_ids);
    const double hi = static_cast<double>(std::min(g.centers.size(), y_ids.size()));
    const double rr = std::clamp(r, 1.0, std::max(1.0, hi));

    std::vector<Annulus> annuli;
    annuli.reserve(g.centers.size());
    for (const Point& c : g.centers) annuli.push_back({c, iv});
    CuttingParams params = cfg.cutting;
    params.margin = margin;
    HierarchicalCutting hc = build_hierarchical_cutting(annulus_circles(annuli, margin), rr, rng, params);
    locate_points(hc, ys.points(), y_ids, cfg.preserve_order);
    compute_contained_annuli(hc, annuli);

    auto gather = [&](auto&& owners) {
        std::vector<PointId> side;
        for (int o : owners) {
            const auto& m = g.members[static_cast<std::size_t>(o)];
            side.insert(side.end(), m.begin(), m.end());
        }
        if (cfg.preserve_order) std::sort(side.begin(), side.end());
        return side;
    };

    for (const CuttingCell& c : hc.cells()) {
        if (c.contained_a.empty() || c.canonical_b.empty()) continue;
        out.gamma.push_back({gather(c.contained_a), c.canonical_b});
    }

    const auto run = static_cast<std::size_t>(
        std::ceil(static_cast<double>(y_ids.size()) / (rr * rr)));
    std::vector<int> owners;
    for (int leaf : hc.levels().back()) {
        const CuttingCell& c = hc.cell(leaf);
        if (c.conflict.empty() || c.canonical_b.empty()) continue;
        owners.clear();
        for (int cid : c.conflict) {
            const int o = hc.circles()[static_cast<std::size_t>(cid)].owner;
            if (owners.empty() || owners.back() != o) owners.push_back(o);
        }
        std::vector<PointId> a_hat = gather(owners);
        const std::size_t len = c.canonical_b.size();
        const std::size_t runs = std::max<std::size_t>(1, len / run);
        for (std::size_t i = 0; i < runs; ++i) {
            const std::size_t b = i * run;
            const std::size_t e = i + 1 == runs ? len : b + run;
            out.sub.push_back({a_hat, std::vector<PointId>(c.canonical_b.begin() + static_cast<std::ptrdiff_t>(b),
                                                           c.canonical_b.begin() + static_cast<std::ptrdiff_t>(e))});
        }
    }
    return out;
}

/// Primal round on A's annuli, dual round on every subproblem.
void partial_into(BrsOutput& out, const PointSet& a, std::span<const PointId> a_ids,
                  const PointSet& b, std::span<const PointId> b_ids, SqInterval iv, double r,
                  double margin, Rng& rng, const BrsConfig& cfg) {
    Round primal = cutting_round(a, a_ids, b, b_ids, iv, r, margin, rng, cfg);
    append(out.gamma.bicliques, std::move(primal.gamma));
    for (Biclique& s : primal.sub) {
        Round dual = cutting_round(b, s.b_side, a, s.a_side, iv, r, margin, rng, cfg);
        flip(dual.gamma);
        flip(dual.sub);
        append(out.gamma.bicliques, std::move(dual.gamma));
        append(out.pi.bicliques, std::move(dual.sub));
    }
}

double selfjoin_r1(double n) { return std::max(1.0, std::cbrt(n) / guarded_log2(n)); }
double selfjoin_r2(double n) {
    return std::max(1.0, guarded_log2(n) / guarded_log2(guarded_log2(n)));
}

/// Two-round procedure on an id-restricted instance; n is the size driving
/// the parameters.
void two_round_into(BrsOutput& out, const PointSet& a, std::span<const PointId> a_ids,
                    const PointSet& b, std::span<const PointId> b_ids, SqInterval iv, double n,
                    double margin, Rng& rng, const BrsConfig& cfg) {
    BrsOutput first;
    partial_into(first, a, a_ids, b, b_ids, iv, selfjoin_r1(n), margin, rng, cfg);
    append(out.gamma.bicliques, std::move(first.gamma.bicliques));
    const double r2 = selfjoin_r2(n);
    for (const Biclique& s : first.pi.bicliques) {
        partial_into(out, a, s.a_side, b, s.b_side, iv, r2, margin, rng, cfg);
    }
}

void complete_into(std::vector<Biclique>& out, const PointSet& a, std::span<const PointId> a_ids,
                   const PointSet& b, std::span<const PointId> b_ids, SqInterval iv,
                   double margin, Rng& rng, const BrsConfig& cfg) {
    const std::uint64_t m = a_ids.size();
    const std::uint64_t n = b_ids.size();
    if (m == 0 || n == 0) return;
    const std::uint64_t product = m * n;
    if (product <= cfg.brute_cutoff) {
        append(out, brute_bicliques(a, a_ids, b, b_ids, iv));
        return;
    }

    // Work with the smaller side as the annulus side x.
    const bool swapped = m > n;
    const PointSet& xs = swapped ? b : a;
    const PointSet& ys = swapped ? a : b;
    const std::span<const PointId> x_ids = swapped ? b_ids : a_ids;
    const std::span<const PointId> y_ids = swapped ? a_ids : b_ids;
    const double mm = static_cast<double>(std::min(m, n));
    const double nn = static_cast<double>(std::max(m, n));

    auto emit = [&](std::vector<Biclique>&& g) {
        if (swapped) flip(g);
        append(out, std::move(g));
    };
    // Subproblems arrive in (x, y) orientation.
    auto recurse = [&](const Biclique& s) {
        const PointSet& sa = swapped ? ys : xs;
        const PointSet& sb = swapped ? xs : ys;
        const auto& ia = swapped ? s.b_side : s.a_side;
        const auto& ib = swapped ? s.a_side : s.b_side;
        if (static_cast<std::uint64_t>(ia.size()) * ib.size() >= product) {
            append(out, brute_bicliques(sa, ia, sb, ib, iv));
        } else {
            complete_into(out, sa, ia, sb, ib, iv, margin, rng, cfg);
        }
    };

    if (nn >= mm * mm) {
        Round rd = cutting_round(xs, x_ids, ys, y_ids, iv, mm, margin, rng, cfg);
        emit(std::move(rd.gamma));
        for (const Biclique& s : rd.sub) {
            std::vector<Biclique> leaf = brute_bicliques(xs, s.a_side, ys, s.b_side, iv);
            emit(std::move(leaf));
        }
    } else if (nn >= 2.0 * mm) {
        Round rd = cutting_round(xs, x_ids, ys, y_ids, iv, nn / mm, margin, rng, cfg);
        emit(std::move(rd.gamma));
        for (const Biclique& s : rd.sub) recurse(s);
    } else {
        const double r = std::max(std::cbrt(nn) / guarded_log2(nn), cfg.balanced_r_floor);
        Round primal = cutting_round(xs, x_ids, ys, y_ids, iv, r, margin, rng, cfg);
        emit(std::move(primal.gamma));
        for (const Biclique& s : primal.sub) {
            Round dual = cutting_round(ys, s.b_side, xs, s.a_side, iv, r, margin, rng, cfg);
            flip(dual.gamma);
            flip(dual.sub);
            emit(std::move(dual.gamma));
            for (const Biclique& t : dual.sub) recurse(t);
        }
    }
}

}  // namespace

void BrsOutput::refresh_stats() {
    stats = {};
    stats.gamma_count = gamma.bicliques.size();
    stats.pi_count = pi.bicliques.size();
    for (const Biclique& b : gamma.bicliques) {
        stats.gamma_a_sum += b.a_side.size();
        stats.gamma_b_sum += b.b_side.size();
        stats.gamma_edges += b.edges();
    }
    for (const Biclique& b : pi.bicliques) stats.pi_pairs += b.edges();
}

std::vector<Biclique> brute_bicliques(const PointSet& a, std::span<const PointId> a_ids,
                                      const PointSet& b, std::span<const PointId> b_ids,
                                      SqInterval iv) {
    std::vector<Biclique> out;
    if (a_ids.empty() || b_ids.empty() || empty_interval(iv)) return out;
    Groups ga = group_by_coordinate(a, a_ids);
    Groups gb = group_by_coordinate(b, b_ids);
    for (std::size_t i = 0; i < ga.centers.size(); ++i) {
        for (std::size_t j = 0; j < gb.centers.size(); ++j) {
            if (iv.contains(sq_dist(ga.centers[i], gb.centers[j]))) {
                out.push_back({ga.members[i], gb.members[j]});
            }
        }
    }
    return out;
}

BrsOutput partial_brs(const PointSet& a, std::span<const PointId> a_ids, const PointSet& b,
                      std::span<const PointId> b_ids, SqInterval iv, double r, Rng& rng,
                      const BrsConfig& cfg) {
    if (!(r >= 1.0)) throw InvalidInput("partial BRS needs r >= 1");
    BrsOutput out;
    if (!empty_interval(iv)) {
        partial_into(out, a, a_ids, b, b_ids, iv, r, band_margin(a, b, iv), rng, cfg);
    }
    out.refresh_stats();
    return out;
}

BrsOutput partial_brs(const PointSet& a, const PointSet& b, SqInterval iv, double r, Rng& rng,
                      bool preserve_order) {
    BrsConfig cfg;
    cfg.preserve_order = preserve_order;
    const auto ia = all_ids(a);
    const auto ib = all_ids(b);
    return partial_brs(a, ia, b, ib, iv, r, rng, cfg);
}

BrsOutput partial_brs_selfjoin(const PointSet& p, SqInterval iv, Rng& rng, const BrsConfig& cfg) {
    if (p.size() < 2) throw InvalidInput("self-join BRS needs at least two points");
    BrsOutput out;
    if (!empty_interval(iv)) {
        const auto ids = all_ids(p);
        two_round_into(out, p, ids, p, ids, iv, static_cast<double>(p.size()),
                       band_margin(p, p, iv), rng, cfg);
    }
    out.refresh_stats();
    return out;
}

BrsOutput partial_brs_bipartite(const PointSet& a, const PointSet& b, SqInterval iv, Rng& rng,
                                const BrsConfig& cfg) {
    BrsOutput out;
    if (a.empty() || b.empty() || empty_interval(iv)) {
        out.refresh_stats();
        return out;
    }
    const double margin = band_margin(a, b, iv);
    const auto ia = all_ids(a);
    const auto ib = all_ids(b);
    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    const bool swapped = m > n;
    const PointSet& xs = swapped ? b : a;
    const PointSet& ys = swapped ? a : b;
    const auto& x_ids = swapped ? ib : ia;
    const auto& y_ids = swapped ? ia : ib;
    const double lo = std::min(m, n);
    const double hi = std::max(m, n);

    if (hi < 2.0 * lo) {
        two_round_into(out, a, ia, b, ib, iv, hi, margin, rng, cfg);
    } else {
        const double r = hi >= lo * lo ? lo : hi / lo;
        Round rd = cutting_round(xs, x_ids, ys, y_ids, iv, r, margin, rng, cfg);
        if (swapped) flip(rd.gamma);
        append(out.gamma.bicliques, std::move(rd.gamma));
        for (Biclique& s : rd.sub) {
            if (swapped) std::swap(s.a_side, s.b_side);
            if (hi >= lo * lo) {
                append(out.gamma.bicliques, brute_bicliques(a, s.a_side, b, s.b_side, iv));
            } else {
                const double sub_n = static_cast<double>(std::max(s.a_side.size(), s.b_side.size()));
                two_round_into(out, a, s.a_side, b, s.b_side, iv, sub_n, margin, rng, cfg);
            }
        }
    }
    out.refresh_stats();
    return out;
}

CliqueCover complete_brs(const PointSet& a, const PointSet& b, SqInterval iv, Rng& rng,
                         const BrsConfig& cfg) {
    CliqueCover out{{}, CoverRole::Gamma};
    if (a.empty() || b.empty() || empty_interval(iv)) return out;
    const auto ia = all_ids(a);
    const auto ib = all_ids(b);
    complete_into(out.bicliques, a, ia, b, ib, iv, band_margin(a, b, iv), rng, cfg);
    return out;
}

CliqueCover complete_brs(const PointSet& a, const PointSet& b, SqInterval iv, Rng& rng,
                         bool preserve_order) {
    BrsConfig cfg;
    cfg.preserve_order = preserve_order;
    return complete_brs(a, b, iv, rng, cfg);
}

BrsOutput brs_for_L(const PointSet& a, const PointSet& b, SqInterval iv, double L, Rng& rng,
                    const BrsConfig& cfg) {
    if (!(L >= 1.0)) throw InvalidInput("L must be at least 1");
    const double r = std::max(1.0, std::cbrt(static_cast<double>(a.size() + b.size()) / L));
    const auto ia = all_ids(a);
    const auto ib = all_ids(b);
    return partial_brs(a, ia, b, ib, iv, r, rng, cfg);
}

std::uint64_t count_edges(const CliqueCover& cover) {
    std::uint64_t total = 0;
    for (const Biclique& b : cover.bicliques) total += b.edges();
    return total;
}

std::uint64_t count_gamma_edges(const BrsOutput& out) { return count_edges(out.gamma); }

UncertainSampler::UncertainSampler(const CliqueCover& pi) : pi_(&pi) {
    prefix_.reserve(pi.bicliques.size());
    for (const Biclique& b : pi.bicliques) {
        total_ += b.edges();
        prefix_.push_back(total_);
    }
}

std::pair<PointId, PointId> UncertainSampler::operator()(Rng& rng) const {
    if (total_ == 0) throw EmptyCollection("no uncertain pairs to sample");
    const std::uint64_t u = rng.below(total_);
    const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
    const Biclique& b = pi_->bicliques[static_cast<std::size_t>(it - prefix_.begin())];
    const PointId x = b.a_side[rng.below(b.a_side.size())];
    const PointId y = b.b_side[rng.below(b.b_side.size())];
    return {x, y};
}

std::pair<PointId, PointId> sample_uncertain_pair(const BrsOutput& out, Rng& rng) {
    return UncertainSampler(out.pi)(rng);
}

}  // namespace distopt
