#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "distopt/brs.hpp"
#include "distopt/core.hpp"

namespace distopt {

enum class CountStrategy : std::uint8_t { Brute, Grid, Brs };

/// Unordered pairs {a, b} of distinct ids with sq_dist <= sq_delta.
std::uint64_t count_pairs_at_most(const PointSet& p, SqDist sq_delta,
                                  CountStrategy strategy = CountStrategy::Grid);
/// Pairs (a, b) in A x B with sq_dist <= sq_delta.
std::uint64_t count_cross_pairs_at_most(const PointSet& a, const PointSet& b, SqDist sq_delta,
                                        CountStrategy strategy = CountStrategy::Grid);

/// True iff the k-th smallest pairwise distance is at most sq_delta.
bool decide_rank(const PointSet& p, std::uint64_t k, SqDist sq_delta,
                 CountStrategy strategy = CountStrategy::Grid);

struct WeightedCandidate {
    SqDist value;
    double weight;
};

/// Candidate distances from the cross edges of random d-regular graphs built
/// on chunks of every biclique. `a` and `b` resolve the two sides' ids.
std::vector<WeightedCandidate> build_expander_candidates(const CliqueCover& gamma, int d, Rng& rng,
                                                         const PointSet& a, const PointSet& b);

struct WeightPartition {
    std::vector<SqDist> bounds;   ///< ascending bucket upper ends
    std::vector<double> weights;  ///< bucket weights
};

/// Greedy buckets of weight >= m_stage/4 over the value-sorted candidates.
/// Equal values never straddle a boundary; a light tail joins the last bucket.
WeightPartition weighted_interval_partition(std::vector<WeightedCandidate> cands, double m_stage,
                                            int d);

struct SelectionConfig {
    double c_thresh = 1.0;
    double c_guard = 4.0;
    int degree = 16;
    CountStrategy strategy = CountStrategy::Grid;
    BrsConfig brs;
};

/// Snapshot after one stage.
struct StageState {
    SqInterval interval;
    int stage_index = 0;
    std::uint64_t k = 0;
    std::uint64_t gamma_edges = 0;
    std::uint64_t pi_pairs = 0;
    std::size_t candidates = 0;
    int decision_calls = 0;
};

struct RunStats {
    int stages = 0;
    int decision_calls = 0;
    std::uint64_t gamma_edges = 0;  ///< summed over stages or rounds
    std::uint64_t pi_pairs = 0;
    std::optional<int> shrink_rounds;
    bool fallback = false;        ///< stage guard hit, answer came from enumeration
    bool low_confidence = false;  ///< shrinking hit its round cap
    std::vector<StageState> trace;
};

/// Exact k-th smallest squared distance among the n(n-1)/2 unordered pairs.
SqDist select_distance(const PointSet& p, std::uint64_t k, Rng& rng, const SelectionConfig& cfg = {},
                       RunStats* stats = nullptr);
/// Exact k-th smallest squared distance over A x B.
SqDist select_distance_bipartite(const PointSet& a, const PointSet& b, std::uint64_t k, Rng& rng,
                                 const SelectionConfig& cfg = {}, RunStats* stats = nullptr);

// Stage engine shared with the deterministic framework ----------------------

struct StageProblem {
    const PointSet* a = nullptr;
    const PointSet* b = nullptr;
    bool self_join = false;
    std::function<BrsOutput(SqInterval, Rng&)> stage_brs;
    /// Monotone "v >= optimum".
    std::function<bool(SqDist)> decide;
    /// Finish from a cover of the current interval.
    std::function<SqDist(SqInterval, const BrsOutput&)> finish;
    double threshold = 0.0;
    int max_stages = 0;
    std::uint64_t k = 0;  ///< informational, copied into the trace
};

/// Runs expander stages until the stage cover is small enough, then calls
/// finish. Past max_stages, finish receives a cover of all of A x B.
SqDist run_stages(const StageProblem& problem, Rng& rng, const SelectionConfig& cfg, RunStats* stats);

/// In-range squared distances recorded by the cover. With self_join only
/// pairs with a < b are kept.
std::vector<SqDist> materialize_in_range(const BrsOutput& out, const PointSet& a, const PointSet& b,
                                         SqInterval interval, bool self_join);

/// Whether some a in A and b in B share coordinates.
bool has_coincident_cross_pair(const PointSet& a, const PointSet& b);

}  // namespace distopt
