#pragma once

#include <functional>
#include <vector>

#include "distopt/core.hpp"
#include "distopt/selection.hpp"

namespace distopt {

/// Monotone predicate "v >= optimum" on squared distances.
using DecisionFn = std::function<bool(SqDist)>;

enum class PairSpace : std::uint8_t { Bipartite, SelfJoin };

struct FrameworkConfig {
    SelectionConfig stages;
    double c2 = 8.0;        ///< sampling-test sample size factor
    double c_r = 8.0;       ///< shrink sample size factor
    double c_rounds = 4.0;  ///< shrink round cap factor
    double c_retry = 4.0;   ///< candidate blow-up factor triggering a rerun
    int max_reruns = 8;
};

using OptimizeStats = RunStats;

struct ShrinkResult {
    SqInterval interval;
    double claimed_L = 0.0;
    int rounds = 0;
    int decision_calls = 0;
    bool low_confidence = false;
    std::vector<SqInterval> history;  ///< interval after every round
};

/// Least cross distance v with decision(v), found by expander stages.
SqDist optimize_deterministic(const PointSet& a, const PointSet& b, const DecisionFn& decision,
                              Rng& rng, const FrameworkConfig& cfg = {},
                              OptimizeStats* stats = nullptr);

/// Narrows (0, inf] to an interval holding the optimum and, with high
/// probability, at most L candidate distances.
ShrinkResult shrink_interval(const PointSet& a, const PointSet& b, double L,
                             const DecisionFn& decision, Rng& rng, const FrameworkConfig& cfg = {},
                             PairSpace space = PairSpace::Bipartite);

/// shrink_interval followed by enumeration and binary search in the interval.
SqDist optimize_randomized(const PointSet& a, const PointSet& b, double L,
                           const DecisionFn& decision, Rng& rng, const FrameworkConfig& cfg = {},
                           OptimizeStats* stats = nullptr, PairSpace space = PairSpace::Bipartite);

/// Least value of the sorted distinct list accepted by the decision.
/// Throws NoFeasibleValue when none is.
SqDist least_feasible(const std::vector<SqDist>& sorted_distinct, const DecisionFn& decision,
                      int* calls = nullptr);

}  // namespace distopt
