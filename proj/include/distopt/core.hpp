#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace distopt {

/// Squared Euclidean distance. Every threshold, interval end and optimum in
/// the library is carried in this unit; only user-facing output takes roots.
using SqDist = double;
using PointId = std::int32_t;

inline constexpr SqDist kInfSq = std::numeric_limits<double>::infinity();

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline SqDist sq_dist(Point p, Point q) noexcept {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return dx * dx + dy * dy;
}

/// Half-open interval (lo, hi] of squared distances.
struct SqInterval {
    SqDist lo = 0.0;
    SqDist hi = kInfSq;

    bool contains(SqDist v) const noexcept { return lo < v && v <= hi; }
    bool bounded() const noexcept { return hi != kInfSq; }

    friend bool operator==(const SqInterval&, const SqInterval&) = default;
};

inline bool interval_contains(const SqInterval& interval, SqDist v) noexcept {
    return interval.contains(v);
}

// Errors ---------------------------------------------------------------------

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The cutting construction could not meet its conflict bound within the
/// retry budget.
class ConstructionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// The decision procedure rejected every candidate value.
class NoFeasibleValue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyCollection : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WeightBoundViolated : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Point containers -----------------------------------------------------------

/// Planar points addressed by stable ids 0..n-1. Duplicates are allowed.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::vector<Point> points);

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point& operator[](PointId id) const { return points_[static_cast<std::size_t>(id)]; }
    std::span<const Point> points() const noexcept { return points_; }
    const std::vector<Point>& vec() const noexcept { return points_; }

private:
    std::vector<Point> points_;
};

/// A point set whose id order is a traversal order. Never empty.
class PointSequence : public PointSet {
public:
    explicit PointSequence(std::vector<Point> points);
};

// Randomness -----------------------------------------------------------------

/// Seeded generator; the only source of randomness in the library.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }
    /// Uniform real in [0, 1).
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Small numeric helpers shared by the parameter formulas.

/// log2 guarded so tiny sizes never produce logs below 1.
inline double guarded_log2(double v) { return std::log2(std::max(v, 2.0)); }

/// Number of unordered pairs n(n-1)/2.
inline std::uint64_t pair_count(std::size_t n) {
    return n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

/// Largest absolute coordinate, at least 1. Used to scale numeric margins.
double coordinate_scale(std::span<const Point> pts);

}  // namespace distopt
