#pragma once

#include "distopt/core.hpp"
#include "distopt/framework.hpp"

namespace distopt {

/// Reverse shortest path query on the unit-disk graph G_delta(points).
struct RspInstance {
    PointSet points;
    PointId s = 0;
    PointId t = 1;
    double lambda = 0.0;  ///< hop budget when unweighted, length budget when weighted
    bool weighted = false;

    /// Throws InvalidInput on bad endpoints or a negative budget.
    void validate() const;
    /// Hop budget used by the unweighted decision (floor of lambda).
    long hop_budget() const;
};

bool udg_decide(const RspInstance& inst, SqDist sq_delta);

/// Hop distance from s to t in G_delta, or -1 when unreachable.
long udg_hops(const PointSet& points, PointId s, PointId t, SqDist sq_delta);
/// Euclidean shortest path length from s to t in G_delta, or +inf.
double udg_length(const PointSet& points, PointId s, PointId t, SqDist sq_delta);

/// Least realized pairwise squared distance meeting the budget.
SqDist rsp(const RspInstance& inst, Rng& rng, const FrameworkConfig& cfg = {},
           RunStats* stats = nullptr);

double rsp_L(std::size_t n, bool weighted);

}  // namespace distopt
