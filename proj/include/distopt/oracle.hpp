#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distopt/brs.hpp"
#include "distopt/core.hpp"
#include "distopt/dfd.hpp"
#include "distopt/udg.hpp"

// Brute-force references. Only core primitives and plain data types from the
// other headers are used here; no algorithm is shared with the library.
namespace distopt::oracle {

SqDist brute_kth(const PointSet& p, std::uint64_t k);
SqDist brute_kth_bipartite(const PointSet& a, const PointSet& b, std::uint64_t k);

/// All n(n-1)/2 squared distances, sorted.
std::vector<SqDist> all_pair_distances(const PointSet& p);
/// All m*n cross squared distances, sorted.
std::vector<SqDist> all_cross_distances(const PointSet& a, const PointSet& b);

/// Linear sweep of the sorted candidates.
SqDist brute_min_feasible(std::vector<SqDist> candidates, const std::function<bool(SqDist)>& decision);

struct BrsCheckReport {
    bool ok = true;
    std::string message;
    std::optional<std::pair<PointId, PointId>> pair;
    std::uint64_t in_range = 0;  ///< in-range ordered pairs of A x B
};

/// Exhaustive check of both cover conditions and edge-disjointness.
BrsCheckReport brute_brs_check(const PointSet& a, const PointSet& b, SqInterval interval,
                               const CliqueCover& gamma, const CliqueCover& pi);
BrsCheckReport brute_brs_check(const PointSet& a, const PointSet& b, SqInterval interval,
                               const BrsOutput& out);

bool brute_dfd2(const DfdInstance& inst, SqDist sq_delta);
bool brute_dfd1(const DfdInstance& inst, SqDist sq_delta);
/// Least cross distance accepted by the brute decision.
SqDist brute_dfd2_optimum(const DfdInstance& inst);
SqDist brute_dfd1_optimum(const DfdInstance& inst);

/// Decision on the explicit graph.
bool brute_udg_decide(const RspInstance& inst, SqDist sq_delta);
SqDist brute_rsp(const RspInstance& inst);

}  // namespace distopt::oracle
