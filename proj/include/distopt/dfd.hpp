#pragma once

#include "distopt/core.hpp"
#include "distopt/framework.hpp"

namespace distopt {

/// Two point sequences walked by two frogs on a leash.
struct DfdInstance {
    PointSequence a_seq;
    PointSequence b_seq;

    std::size_t m() const noexcept { return a_seq.size(); }
    std::size_t n() const noexcept { return b_seq.size(); }
    /// Leash predicate M(i, j) with 0-based indices.
    bool within(std::size_t i, std::size_t j, SqDist sq_delta) const {
        return sq_dist(a_seq[static_cast<PointId>(i)], b_seq[static_cast<PointId>(j)]) <= sq_delta;
    }
};

/// Both frogs may jump forward any distance, one frog per move.
bool dfd2_decide(const DfdInstance& inst, SqDist sq_delta);
/// Only the A-frog may skip points; the B-frog advances one point at a time.
bool dfd1_decide(const DfdInstance& inst, SqDist sq_delta);

SqDist dfd2(const DfdInstance& inst, Rng& rng, const FrameworkConfig& cfg = {},
            RunStats* stats = nullptr);
SqDist dfd1(const DfdInstance& inst, Rng& rng, const FrameworkConfig& cfg = {},
            RunStats* stats = nullptr);

/// L = (m+n)^{2/5} log^{9/5}(m+n), clamped to [1, mn].
double dfd1_L(std::size_t m, std::size_t n);

}  // namespace distopt
