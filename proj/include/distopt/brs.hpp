#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "distopt/core.hpp"
#include "distopt/cuttings.hpp"

namespace distopt {

struct Biclique {
    std::vector<PointId> a_side;
    std::vector<PointId> b_side;

    std::uint64_t edges() const noexcept {
        return static_cast<std::uint64_t>(a_side.size()) * b_side.size();
    }
};

enum class CoverRole : std::uint8_t { Gamma, Pi };

struct CliqueCover {
    std::vector<Biclique> bicliques;
    CoverRole role = CoverRole::Gamma;
};

struct BrsStats {
    std::uint64_t gamma_count = 0;
    std::uint64_t pi_count = 0;
    std::uint64_t gamma_a_sum = 0;  ///< sum of |A_t|
    std::uint64_t gamma_b_sum = 0;  ///< sum of |B_t|
    std::uint64_t gamma_edges = 0;  ///< sum of |A_t||B_t|
    std::uint64_t pi_pairs = 0;     ///< sum of |A'_s||B'_s|
};

struct BrsOutput {
    CliqueCover gamma{{}, CoverRole::Gamma};
    CliqueCover pi{{}, CoverRole::Pi};
    BrsStats stats;

    void refresh_stats();
};

struct BrsConfig {
    CuttingParams cutting = [] {
        CuttingParams p;
        p.strict = false;
        return p;
    }();
    bool preserve_order = false;
    /// complete_brs solves instances with |A||B| at or below this by brute force.
    std::uint64_t brute_cutoff = 64;
    /// Blocks with |X||Y| at or below this skip the cutting: fully in-range
    /// blocks go to Gamma, mixed blocks stay uncertain.
    std::uint64_t leaf_cutoff = 4096;
    /// Lower bound on r in balanced complete_brs rounds.
    double balanced_r_floor = 4.0;
};

/// One primal round followed by a dual round on every subproblem. Residual
/// sub-subproblems form Pi.
BrsOutput partial_brs(const PointSet& a, const PointSet& b, SqInterval interval, double r, Rng& rng,
                      bool preserve_order = false);
BrsOutput partial_brs(const PointSet& a, std::span<const PointId> a_ids, const PointSet& b,
                      std::span<const PointId> b_ids, SqInterval interval, double r, Rng& rng,
                      const BrsConfig& cfg = {});

/// Two-round self-join: r1 = n^{1/3}/log n, then r2 = log n / log log n on
/// every uncertain biclique. Pairs are ordered, so each in-range unordered
/// pair is covered twice.
BrsOutput partial_brs_selfjoin(const PointSet& p, SqInterval interval, Rng& rng,
                               const BrsConfig& cfg = {});

/// Stage BRS for A x B with the size-dependent parameterization: balanced
/// sizes use the two-round procedure, skewed sizes first cut with r = n/m,
/// and very skewed sizes (n >= m^2) are finished by brute force.
BrsOutput partial_brs_bipartite(const PointSet& a, const PointSet& b, SqInterval interval,
                                Rng& rng, const BrsConfig& cfg = {});

/// Full cover with Pi empty.
CliqueCover complete_brs(const PointSet& a, const PointSet& b, SqInterval interval, Rng& rng,
                         bool preserve_order = false);
CliqueCover complete_brs(const PointSet& a, const PointSet& b, SqInterval interval, Rng& rng,
                         const BrsConfig& cfg);

/// partial_brs with r = ((m+n)/L)^{1/3}.
BrsOutput brs_for_L(const PointSet& a, const PointSet& b, SqInterval interval, double L, Rng& rng,
                    const BrsConfig& cfg = {});

std::uint64_t count_gamma_edges(const BrsOutput& out);
std::uint64_t count_edges(const CliqueCover& cover);

/// Uniform sampling over all ordered pairs recorded in Pi.
class UncertainSampler {
public:
    explicit UncertainSampler(const CliqueCover& pi);
    bool empty() const noexcept { return total_ == 0; }
    std::uint64_t total() const noexcept { return total_; }
    std::pair<PointId, PointId> operator()(Rng& rng) const;

private:
    const CliqueCover* pi_;
    std::vector<std::uint64_t> prefix_;
    std::uint64_t total_ = 0;
};

/// Throws EmptyCollection when Pi records no pair.
std::pair<PointId, PointId> sample_uncertain_pair(const BrsOutput& out, Rng& rng);

/// Every pair of distinct-coordinate groups in range, one biclique per group
/// pair. Coincident points share a group.
std::vector<Biclique> brute_bicliques(const PointSet& a, std::span<const PointId> a_ids,
                                      const PointSet& b, std::span<const PointId> b_ids,
                                      SqInterval interval);

}  // namespace distopt
