#include "distopt/framework.hpp"

#include <algorithm>
#include <cmath>

namespace distopt {

namespace {

std::vector<SqDist> sorted_distinct(std::vector<SqDist> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

double total_pairs(const PointSet& a, const PointSet& b, PairSpace space) {
    if (space == PairSpace::SelfJoin) return static_cast<double>(pair_count(a.size()));
    return static_cast<double>(a.size()) * static_cast<double>(b.size());
}

bool zero_realized(const PointSet& a, const PointSet& b, PairSpace space) {
    if (space == PairSpace::Bipartite) return has_coincident_cross_pair(a, b);
    return count_pairs_at_most(a, 0.0, CountStrategy::Grid) > 0;
}

}  // namespace

SqDist least_feasible(const std::vector<SqDist>& values, const DecisionFn& decision, int* calls) {
    std::size_t lo = 0;
    std::size_t hi = values.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (calls) ++*calls;
        if (decision(values[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    if (lo == values.size()) throw NoFeasibleValue("decision rejects every candidate value");
    return values[lo];
}

SqDist optimize_deterministic(const PointSet& a, const PointSet& b, const DecisionFn& decision,
                              Rng& rng, const FrameworkConfig& cfg, OptimizeStats* stats) {
    if (a.empty() || b.empty()) throw InvalidInput("both point sets must be nonempty");
    OptimizeStats local;
    OptimizeStats& st = stats ? *stats : local;
    if (has_coincident_cross_pair(a, b)) {
        ++st.decision_calls;
        if (decision(0.0)) return 0.0;
    }
    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    const SelectionConfig& sc = cfg.stages;
    StageProblem pb;
    pb.a = &a;
    pb.b = &b;
    pb.threshold = sc.c_thresh *
                   (std::cbrt(m * m * n * n) + m * guarded_log2(n) + n * guarded_log2(m)) *
                   guarded_log2(m + n);
    pb.max_stages = static_cast<int>(std::ceil(sc.c_guard * guarded_log2(m + n)));
    pb.stage_brs = [&](SqInterval iv, Rng& r) { return partial_brs_bipartite(a, b, iv, r, sc.brs); };
    pb.decide = decision;
    pb.finish = [&](SqInterval iv, const BrsOutput& out) {
        return least_feasible(sorted_distinct(materialize_in_range(out, a, b, iv, false)), decision,
                              &st.decision_calls);
    };
    return run_stages(pb, rng, sc, &st);
}

ShrinkResult shrink_interval(const PointSet& a, const PointSet& b, double L, const DecisionFn& decision,
                             Rng& rng, const FrameworkConfig& cfg, PairSpace space) {
    if (a.empty() || b.empty()) throw InvalidInput("both point sets must be nonempty");
    if (!(L >= 1.0)) throw InvalidInput("L must be at least 1");
    ShrinkResult res;
    res.interval = {0.0, kInfSq};
    res.claimed_L = L;
    if (L >= total_pairs(a, b, space)) return res;

    const bool self = space == PairSpace::SelfJoin;
    const double lg = guarded_log2(static_cast<double>(a.size() + b.size()));
    const int cap = static_cast<int>(std::ceil(cfg.c_rounds * lg));
    const auto r_size = static_cast<std::size_t>(std::ceil(cfg.c_r * lg));
    const double half = L / 2.0;
    // Ordered pairs in self-join covers count every unordered pair twice.
    const double scale = self ? 0.5 : 1.0;

    for (;;) {
        const SqInterval iv = res.interval;
        const BrsOutput out = brs_for_L(a, b, iv, L, rng, cfg.stages.brs);
        ++res.rounds;
        const double s1 = scale * static_cast<double>(out.stats.gamma_edges);
        const double big_m = static_cast<double>(out.stats.pi_pairs);
        const UncertainSampler pi_sampler(out.pi);
        const UncertainSampler gamma_sampler(out.gamma);

        bool s2_small = true;
        if (big_m > 0.0) {
            const auto draws = static_cast<std::size_t>(std::ceil(cfg.c2 * std::max(1.0, big_m / L) * lg));
            std::size_t hits = 0;
            for (std::size_t i = 0; i < draws; ++i) {
                const auto [x, y] = pi_sampler(rng);
                if (iv.contains(sq_dist(a[x], b[y]))) ++hits;
            }
            const double estimate = scale * big_m * static_cast<double>(hits) / static_cast<double>(draws);
            s2_small = estimate <= 0.75 * half;
        }
        if (s1 <= half && s2_small) return res;
        if (res.rounds >= cap) {
            res.low_confidence = true;
            return res;
        }

        // Uniform draws over the in-range recorded pairs: pick a recorded
        // pair uniformly, reject uncertain ones outside the interval.
        const double g_total = static_cast<double>(gamma_sampler.total());
        const double all_total = g_total + big_m;
        std::vector<SqDist> sample;
        sample.reserve(r_size);
        std::size_t attempts = 0;
        const std::size_t max_attempts = 64 * r_size;
        while (sample.size() < r_size && attempts < max_attempts) {
            ++attempts;
            if (rng.unit() * all_total < g_total) {
                const auto [x, y] = gamma_sampler(rng);
                sample.push_back(sq_dist(a[x], b[y]));
            } else {
                const auto [x, y] = pi_sampler(rng);
                const SqDist v = sq_dist(a[x], b[y]);
                if (iv.contains(v)) sample.push_back(v);
            }
        }
        while (sample.size() < r_size && !gamma_sampler.empty()) {
            const auto [x, y] = gamma_sampler(rng);
            sample.push_back(sq_dist(a[x], b[y]));
        }
        if (sample.empty()) return res;

        const std::vector<SqDist> vals = sorted_distinct(std::move(sample));
        std::size_t lo = 0;
        std::size_t hi = vals.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            ++res.decision_calls;
            if (decision(vals[mid])) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        res.interval = {lo == 0 ? iv.lo : vals[lo - 1], lo == vals.size() ? iv.hi : vals[lo]};
        res.history.push_back(res.interval);
    }
}

SqDist optimize_randomized(const PointSet& a, const PointSet& b, double L, const DecisionFn& decision,
                           Rng& rng, const FrameworkConfig& cfg, OptimizeStats* stats, PairSpace space) {
    if (a.empty() || b.empty()) throw InvalidInput("both point sets must be nonempty");
    OptimizeStats local;
    OptimizeStats& st = stats ? *stats : local;
    const bool self = space == PairSpace::SelfJoin;
    if (self && a.size() < 2) throw InvalidInput("self-join needs at least two points");
    if (zero_realized(a, b, space)) {
        ++st.decision_calls;
        if (decision(0.0)) return 0.0;
    }
    L = std::clamp(L, 1.0, std::max(1.0, total_pairs(a, b, space)));
    int rounds = 0;
    for (int attempt = 0;; ++attempt) {
        const ShrinkResult sr = shrink_interval(a, b, L, decision, rng, cfg, space);
        rounds += sr.rounds;
        st.decision_calls += sr.decision_calls;
        st.low_confidence = st.low_confidence || sr.low_confidence;
        st.shrink_rounds = rounds;
        const BrsOutput out = brs_for_L(a, b, sr.interval, L, rng, cfg.stages.brs);
        st.stages += 1;
        st.gamma_edges += out.stats.gamma_edges;
        st.pi_pairs += out.stats.pi_pairs;
        std::vector<SqDist> cands = materialize_in_range(out, a, b, sr.interval, self);
        if (static_cast<double>(cands.size()) > cfg.c_retry * L && attempt + 1 < cfg.max_reruns) continue;
        return least_feasible(sorted_distinct(std::move(cands)), decision, &st.decision_calls);
    }
}

}  // namespace distopt
