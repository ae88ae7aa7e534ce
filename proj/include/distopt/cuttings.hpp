#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "distopt/core.hpp"

namespace distopt {

enum class CircleRole : std::uint8_t { Inner, Outer };

/// Region around `center` whose squared distance to the center lies in
/// `interval`.
struct Annulus {
    Point center;
    SqInterval interval;

    bool contains(Point q) const noexcept { return interval.contains(sq_dist(center, q)); }
};

struct BoundaryCircle {
    Point center;
    double sq_radius = 0.0;
    std::int32_t owner = -1;  ///< annulus id
    CircleRole which = CircleRole::Outer;

    double radius() const { return std::sqrt(sq_radius); }
};

/// One x-monotone half of a circle, or an unbounded sentinel.
struct ArcRef {
    std::int32_t circle = -1;
    bool upper = false;  ///< for the sentinel: true means +inf, false means -inf

    static constexpr ArcRef plus_infinity() { return {-1, true}; }
    static constexpr ArcRef minus_infinity() { return {-1, false}; }
    constexpr bool unbounded() const { return circle < 0; }

    friend bool operator==(const ArcRef&, const ArcRef&) = default;
};

/// Region x_lo <= x < x_hi, bottom(x) < y <= top(x).
struct PseudoTrapezoid {
    double x_lo = -std::numeric_limits<double>::infinity();
    double x_hi = std::numeric_limits<double>::infinity();
    ArcRef top = ArcRef::plus_infinity();
    ArcRef bottom = ArcRef::minus_infinity();
};

struct Box {
    double x0, x1, y0, y1;
};

struct CuttingCell {
    PseudoTrapezoid shape;
    int level = 0;
    int parent = -1;
    std::vector<int> children;
    std::vector<int> conflict;        ///< circle ids, ascending
    std::vector<PointId> canonical_b; ///< located point ids
    std::vector<int> contained_a;     ///< annulus ids containing this cell but not its parent
    Box box{};                        ///< bounding box of the shape (may be unbounded)
    Point rep{};                      ///< interior representative point
};

struct CuttingParams {
    double rho = 2.0;
    double sample_const = 2.0;  ///< circles sampled per refinement = ceil(sample_const * rho)
    double slack = 4.0;
    int retry_budget = 8;
    /// Throw ConstructionFailure when the retry budget runs out; otherwise
    /// keep the oversized cell and count it in stats.
    bool strict = true;
    /// Width of the band around each circle treated as crossing. Negative
    /// selects 1e-9 times the coordinate scale.
    double margin = -1.0;
};

struct CuttingStats {
    int resamples = 0;
    int bound_violations = 0;
};

class HierarchicalCutting {
public:
    const std::vector<BoundaryCircle>& circles() const noexcept { return circles_; }
    const std::vector<CuttingCell>& cells() const noexcept { return cells_; }
    const CuttingCell& cell(int id) const { return cells_[static_cast<std::size_t>(id)]; }
    const std::vector<std::vector<int>>& levels() const noexcept { return levels_; }
    int depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }
    double rho() const noexcept { return rho_; }
    double r() const noexcept { return r_; }
    double slack() const noexcept { return slack_; }
    double margin() const noexcept { return margin_; }
    const CuttingStats& stats() const noexcept { return stats_; }

    /// slack * |circles| / rho^level.
    double conflict_bound(int level) const;

    /// Circle ids belonging to annulus `owner` (one or two).
    std::span<const int> circles_of(int owner) const;
    int owner_count() const noexcept { return static_cast<int>(owner_offsets_.size()) - 1; }

    double radius_of(int circle_id) const { return radii_[static_cast<std::size_t>(circle_id)]; }
    double arc_y(ArcRef arc, double x) const;
    /// Geometric membership with the boundary-tie rule.
    bool contains_point(int cell_id, Point p) const;
    /// Whether the circle, widened by the margin band, meets the cell interior.
    bool conflicts(int circle_id, int cell_id) const;
    bool conflicts(int circle_id, const PseudoTrapezoid& shape, const Box& box, Point rep) const;

    Box shape_box(const PseudoTrapezoid& shape) const;
    Point representative_point(const PseudoTrapezoid& shape) const;

    friend HierarchicalCutting build_hierarchical_cutting(std::vector<BoundaryCircle>, double,
                                                          Rng&, const CuttingParams&);
    friend void locate_points(HierarchicalCutting&, std::span<const Point>,
                              std::span<const PointId>, bool);
    friend void compute_contained_annuli(HierarchicalCutting&, std::span<const Annulus>);

private:
    int add_cell(const PseudoTrapezoid& shape, int level, int parent, std::vector<int> conflict);
    void refine(int parent, int level, Rng& rng, const CuttingParams& params);
    void split(const PseudoTrapezoid& shape, const std::vector<int>& conflict, std::size_t sample,
               double bound, int attempts_left, Rng& rng, const CuttingParams& params,
               std::vector<std::pair<PseudoTrapezoid, std::vector<int>>>& out);
    std::vector<PseudoTrapezoid> decompose(const PseudoTrapezoid& shape,
                                           std::span<const int> sample) const;
    int locate_child(int cell_id, Point p) const;

    std::vector<BoundaryCircle> circles_;
    std::vector<double> radii_;
    std::vector<int> owner_offsets_;
    std::vector<int> owner_circles_;
    std::vector<CuttingCell> cells_;
    std::vector<std::vector<int>> levels_;
    double rho_ = 2.0;
    double r_ = 1.0;
    double slack_ = 4.0;
    double margin_ = 0.0;
    CuttingStats stats_;
};

/// Hierarchical (1/r)-cutting of `circles`: levels 0..ceil(log_rho r), each
/// level tiling the plane, conflict lists populated.
HierarchicalCutting build_hierarchical_cutting(std::vector<BoundaryCircle> circles, double r,
                                               Rng& rng, const CuttingParams& params = {});

/// Fills canonical_b on every cell. `ids` selects which points are located;
/// with `preserve_order` they are processed in ascending id order so every
/// canonical list comes out sorted.
void locate_points(HierarchicalCutting& cutting, std::span<const Point> points,
                   std::span<const PointId> ids, bool preserve_order);
void locate_points(HierarchicalCutting& cutting, const PointSet& points, bool preserve_order);

/// Fills contained_a: annulus p is listed at cell s iff D_p contains s but
/// not parent(s). `annuli[i]` must be the annulus owning circles with owner i.
void compute_contained_annuli(HierarchicalCutting& cutting, std::span<const Annulus> annuli);

/// True iff no boundary circle of the annulus conflicts with the cell and
/// the cell's representative point lies in the annulus.
bool annulus_contains_cell(const HierarchicalCutting& cutting, int annulus_id,
                           const Annulus& annulus, int cell_id);

/// Boundary circles of the annuli, grouped by owner. An annulus with lo = 0
/// gets a micro inner circle of radius `micro_radius` around its center.
std::vector<BoundaryCircle> annulus_circles(std::span<const Annulus> annuli, double micro_radius);

/// x-coordinates where two circles meet (0, 1 or 2 values; near-tangent
/// pairs report the tangency abscissa).
std::vector<double> circle_intersections_x(Point c1, double r1, Point c2, double r2);

}  // namespace distopt
