#include "distopt/cuttings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace distopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double branch_y(Point c, double sq_r, bool upper, double x) {
    const double d = x - c.x;
    const double h = std::sqrt(std::max(0.0, sq_r - d * d));
    return upper ? c.y + h : c.y - h;
}

double slab_midpoint(double xa, double xb) {
    if (std::isinf(xa) && std::isinf(xb)) return 0.0;
    if (std::isinf(xa)) return xb - 1.0;
    if (std::isinf(xb)) return xa + 1.0;
    return 0.5 * (xa + xb);
}

}  // namespace

namespace {

struct Hits {
    int count = 0;
    double x[2];
};

Hits intersect_x(Point c1, double r1, Point c2, double r2) {
    Hits h;
    const double dx = c2.x - c1.x;
    const double dy = c2.y - c1.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) return h;
    const double d = std::sqrt(d2);
    const double tol = 1e-12 * std::max({1.0, r1, r2, d});
    if (d > r1 + r2 + tol || d < std::abs(r1 - r2) - tol) return h;
    const double a = (r1 * r1 - r2 * r2 + d2) / (2.0 * d);
    const double off = std::sqrt(std::max(0.0, r1 * r1 - a * a)) * dy / d;
    const double bx = c1.x + a * dx / d;
    if (off == 0.0) {
        h.x[h.count++] = bx;
    } else {
        h.x[h.count++] = bx - std::abs(off);
        h.x[h.count++] = bx + std::abs(off);
    }
    return h;
}

}  // namespace

std::vector<double> circle_intersections_x(Point c1, double r1, Point c2, double r2) {
    const Hits h = intersect_x(c1, r1, c2, r2);
    return std::vector<double>(h.x, h.x + h.count);
}

std::vector<BoundaryCircle> annulus_circles(std::span<const Annulus> annuli, double micro_radius) {
    std::vector<BoundaryCircle> out;
    out.reserve(annuli.size() * 2);
    for (std::size_t i = 0; i < annuli.size(); ++i) {
        const Annulus& a = annuli[i];
        const auto owner = static_cast<std::int32_t>(i);
        if (a.interval.lo > 0.0) {
            out.push_back({a.center, a.interval.lo, owner, CircleRole::Inner});
        } else if (micro_radius > 0.0) {
            out.push_back({a.center, micro_radius * micro_radius, owner, CircleRole::Inner});
        }
        if (a.interval.bounded()) out.push_back({a.center, a.interval.hi, owner, CircleRole::Outer});
    }
    return out;
}

// --- HierarchicalCutting geometry -----------------------------------------

double HierarchicalCutting::conflict_bound(int level) const {
    return slack_ * static_cast<double>(circles_.size()) / std::pow(rho_, level);
}

std::span<const int> HierarchicalCutting::circles_of(int owner) const {
    if (owner < 0 || owner + 1 >= static_cast<int>(owner_offsets_.size())) return {};
    const auto b = static_cast<std::size_t>(owner_offsets_[static_cast<std::size_t>(owner)]);
    const auto e = static_cast<std::size_t>(owner_offsets_[static_cast<std::size_t>(owner) + 1]);
    return std::span<const int>(owner_circles_).subspan(b, e - b);
}

double HierarchicalCutting::arc_y(ArcRef arc, double x) const {
    if (arc.unbounded()) return arc.upper ? kInf : -kInf;
    const BoundaryCircle& c = circles_[static_cast<std::size_t>(arc.circle)];
    return branch_y(c.center, c.sq_radius, arc.upper, x);
}

bool HierarchicalCutting::contains_point(int cell_id, Point p) const {
    const PseudoTrapezoid& s = cell(cell_id).shape;
    if (!(s.x_lo <= p.x && p.x < s.x_hi)) return false;
    return arc_y(s.bottom, p.x) < p.y && p.y <= arc_y(s.top, p.x);
}

Box HierarchicalCutting::shape_box(const PseudoTrapezoid& s) const {
    Box b{s.x_lo, s.x_hi, -kInf, kInf};
    auto extreme = [&](ArcRef arc, bool want_max) {
        const BoundaryCircle& c = circles_[static_cast<std::size_t>(arc.circle)];
        const double near_x = std::clamp(c.center.x, s.x_lo, s.x_hi);
        const double y_near = branch_y(c.center, c.sq_radius, arc.upper, near_x);
        const double y_lo_end = branch_y(c.center, c.sq_radius, arc.upper, s.x_lo);
        const double y_hi_end = branch_y(c.center, c.sq_radius, arc.upper, s.x_hi);
        // Upper branches peak nearest the center column, lower branches dip there.
        if (arc.upper == want_max) return y_near;
        return want_max ? std::max(y_lo_end, y_hi_end) : std::min(y_lo_end, y_hi_end);
    };
    if (!s.top.unbounded()) b.y1 = extreme(s.top, true);
    if (!s.bottom.unbounded()) b.y0 = extreme(s.bottom, false);
    return b;
}

Point HierarchicalCutting::representative_point(const PseudoTrapezoid& s) const {
    const double x = slab_midpoint(s.x_lo, s.x_hi);
    const double yb = arc_y(s.bottom, x);
    const double yt = arc_y(s.top, x);
    return {x, slab_midpoint(yb, yt)};
}

namespace {

/// Does the circle (c, radius) pass through the open interior of the shape?
/// Between consecutive critical abscissae the vertical order of the circle
/// branches and the shape's arcs cannot change, so one midpoint per
/// sub-interval decides.
bool crosses_interior(const HierarchicalCutting& hc, Point c, double radius,
                      const PseudoTrapezoid& s) {
    const double xa = std::max(s.x_lo, c.x - radius);
    const double xb = std::min(s.x_hi, c.x + radius);
    if (!(xa < xb)) return false;
    double crit[8];
    int n = 0;
    crit[n++] = xa;
    crit[n++] = xb;
    for (ArcRef arc : {s.top, s.bottom}) {
        if (arc.unbounded()) continue;
        const BoundaryCircle& bc = hc.circles()[static_cast<std::size_t>(arc.circle)];
        const Hits h = intersect_x(c, radius, bc.center, hc.radius_of(arc.circle));
        for (int k = 0; k < h.count; ++k) {
            if (h.x[k] > xa && h.x[k] < xb) crit[n++] = h.x[k];
        }
    }
    std::sort(crit, crit + n);
    const double sq_r = radius * radius;
    for (int i = 0; i + 1 < n; ++i) {
        if (!(crit[i + 1] > crit[i])) continue;
        const double xm = 0.5 * (crit[i] + crit[i + 1]);
        const double yb = hc.arc_y(s.bottom, xm);
        const double yt = hc.arc_y(s.top, xm);
        for (bool upper : {true, false}) {
            const double y = branch_y(c, sq_r, upper, xm);
            if (yb < y && y < yt) return true;
        }
    }
    return false;
}

}  // namespace

bool HierarchicalCutting::conflicts(int circle_id, const PseudoTrapezoid& s, const Box& box,
                                    Point rep) const {
    if (s.top.circle == circle_id || s.bottom.circle == circle_id) return true;
    const BoundaryCircle& c = circles_[static_cast<std::size_t>(circle_id)];
    const double radius = radii_[static_cast<std::size_t>(circle_id)];
    const double e = margin_;

    const double nx = std::clamp(c.center.x, box.x0, box.x1);
    const double ny = std::clamp(c.center.y, box.y0, box.y1);
    const double dmin = std::sqrt((nx - c.center.x) * (nx - c.center.x) + (ny - c.center.y) * (ny - c.center.y));
    if (dmin > radius + e) return false;
    const double fx = std::max(std::abs(box.x0 - c.center.x), std::abs(box.x1 - c.center.x));
    const double fy = std::max(std::abs(box.y0 - c.center.y), std::abs(box.y1 - c.center.y));
    const double dmax = std::sqrt(fx * fx + fy * fy);
    if (dmax < radius - e) return false;

    if (crosses_interior(*this, c.center, radius + e, s)) return true;
    if (radius > e && crosses_interior(*this, c.center, radius - e, s)) return true;
    // A cell can pinch to a cusp at a corner, where the band's overlap with
    // the interior is too thin to resolve; corners in the band count.
    for (double x : {s.x_lo, s.x_hi}) {
        if (!std::isfinite(x)) continue;
        for (ArcRef arc : {s.top, s.bottom}) {
            if (arc.unbounded()) continue;
            const double d = std::sqrt(sq_dist({x, arc_y(arc, x)}, c.center));
            if (std::abs(d - radius) <= e) return true;
        }
    }
    // Remaining case: the whole cell sits inside the band.
    return std::abs(std::sqrt(sq_dist(rep, c.center)) - radius) <= e;
}

bool HierarchicalCutting::conflicts(int circle_id, int cell_id) const {
    const CuttingCell& cl = cell(cell_id);
    return conflicts(circle_id, cl.shape, cl.box, cl.rep);
}

// --- construction -----------------------------------------------------------

int HierarchicalCutting::add_cell(const PseudoTrapezoid& shape, int level, int parent,
                                  std::vector<int> conflict) {
    CuttingCell c;
    c.shape = shape;
    c.level = level;
    c.parent = parent;
    c.conflict = std::move(conflict);
    c.box = shape_box(shape);
    c.rep = representative_point(shape);
    cells_.push_back(std::move(c));
    const int id = static_cast<int>(cells_.size()) - 1;
    if (parent >= 0) cells_[static_cast<std::size_t>(parent)].children.push_back(id);
    return id;
}

std::vector<PseudoTrapezoid> HierarchicalCutting::decompose(const PseudoTrapezoid& shape,
                                                            std::span<const int> sample) const {
    std::vector<double> xs;
    auto keep = [&](double x) {
        if (x > shape.x_lo && x < shape.x_hi) xs.push_back(x);
    };
    for (int id : sample) {
        const BoundaryCircle& c = circles_[static_cast<std::size_t>(id)];
        const double rad = radii_[static_cast<std::size_t>(id)];
        keep(c.center.x - rad);
        keep(c.center.x + rad);
    }
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto ci = static_cast<std::size_t>(sample[i]);
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const auto cj = static_cast<std::size_t>(sample[j]);
            const Hits h = intersect_x(circles_[ci].center, radii_[ci], circles_[cj].center, radii_[cj]);
            for (int k = 0; k < h.count; ++k) keep(h.x[k]);
        }
        for (ArcRef arc : {shape.top, shape.bottom}) {
            if (arc.unbounded() || arc.circle == sample[i]) continue;
            const auto cb = static_cast<std::size_t>(arc.circle);
            const Hits h = intersect_x(circles_[ci].center, radii_[ci], circles_[cb].center, radii_[cb]);
            for (int k = 0; k < h.count; ++k) keep(h.x[k]);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.insert(xs.begin(), shape.x_lo);
    xs.push_back(shape.x_hi);

    struct Open {
        ArcRef bottom, top;
        std::size_t index;
    };
    std::vector<PseudoTrapezoid> out;
    std::vector<Open> prev, cur;
    std::vector<std::pair<double, ArcRef>> chain;
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        const double xa = xs[s];
        const double xb = xs[s + 1];
        if (!(xb > xa)) continue;
        const double xm = slab_midpoint(xa, xb);
        const double yb = arc_y(shape.bottom, xm);
        const double yt = arc_y(shape.top, xm);
        chain.clear();
        chain.emplace_back(yb, shape.bottom);
        for (int id : sample) {
            const BoundaryCircle& c = circles_[static_cast<std::size_t>(id)];
            if (!(std::abs(xm - c.center.x) < radii_[static_cast<std::size_t>(id)])) continue;
            for (bool upper : {false, true}) {
                const double y = branch_y(c.center, c.sq_radius, upper, xm);
                if (yb < y && y < yt) chain.emplace_back(y, ArcRef{id, upper});
            }
        }
        std::sort(chain.begin() + 1, chain.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            if (a.second.circle != b.second.circle) return a.second.circle < b.second.circle;
            return a.second.upper < b.second.upper;
        });
        chain.emplace_back(yt, shape.top);

        cur.clear();
        for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
            if (!(chain[t + 1].first > chain[t].first)) continue;
            const ArcRef bot = chain[t].second;
            const ArcRef top = chain[t + 1].second;
            auto it = std::find_if(prev.begin(), prev.end(), [&](const Open& o) {
                return o.bottom == bot && o.top == top;
            });
            if (it != prev.end()) {
                out[it->index].x_hi = xb;
                cur.push_back(*it);
            } else {
                out.push_back({xa, xb, top, bot});
                cur.push_back({bot, top, out.size() - 1});
            }
        }
        std::swap(prev, cur);
    }
    return out;
}

void HierarchicalCutting::split(const PseudoTrapezoid& shape, const std::vector<int>& conflict,
                                std::size_t sample_size, double bound, int attempts_left, Rng& rng,
                                const CuttingParams& params,
                                std::vector<std::pair<PseudoTrapezoid, std::vector<int>>>& out) {
    if (conflict.empty()) {
        out.emplace_back(shape, std::vector<int>{});
        return;
    }
    std::vector<int> pool = conflict;
    const std::size_t take = std::min(sample_size, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
        std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    }
    pool.resize(take);

    for (const PseudoTrapezoid& piece : decompose(shape, pool)) {
        const Box box = shape_box(piece);
        const Point rep = representative_point(piece);
        std::vector<int> sub;
        for (int id : conflict) {
            if (conflicts(id, piece, box, rep)) sub.push_back(id);
        }
        if (static_cast<double>(sub.size()) <= bound) {
            out.emplace_back(piece, std::move(sub));
        } else if (attempts_left > 0) {
            ++stats_.resamples;
            split(piece, sub, sample_size * 2, bound, attempts_left - 1, rng, params, out);
        } else if (params.strict) {
            throw ConstructionFailure("cutting cell keeps " + std::to_string(sub.size()) +
                                      " conflicts above bound " + std::to_string(bound) +
                                      " after the retry budget");
        } else {
            ++stats_.bound_violations;
            out.emplace_back(piece, std::move(sub));
        }
    }
}

void HierarchicalCutting::refine(int parent, int level, Rng& rng, const CuttingParams& params) {
    const auto sample = static_cast<std::size_t>(std::ceil(params.sample_const * params.rho));
    std::vector<std::pair<PseudoTrapezoid, std::vector<int>>> pieces;
    const PseudoTrapezoid shape = cell(parent).shape;
    std::vector<int> conflict = cell(parent).conflict;
    // Cells already within the level's target are carried down unsplit.
    if (static_cast<double>(conflict.size()) * std::pow(rho_, level) <= static_cast<double>(circles_.size())) {
        levels_[static_cast<std::size_t>(level)].push_back(add_cell(shape, level, parent, std::move(conflict)));
        return;
    }
    split(shape, conflict, std::max<std::size_t>(sample, 1), conflict_bound(level),
          params.retry_budget, rng, params, pieces);
    for (auto& [piece, sub] : pieces) {
        levels_[static_cast<std::size_t>(level)].push_back(add_cell(piece, level, parent, std::move(sub)));
    }
}

HierarchicalCutting build_hierarchical_cutting(std::vector<BoundaryCircle> circles, double r,
                                               Rng& rng, const CuttingParams& params) {
    if (!(params.rho > 1.0)) throw InvalidInput("cutting refinement ratio must exceed 1");
    if (!(r >= 1.0)) throw InvalidInput("cutting parameter r must be at least 1");

    HierarchicalCutting hc;
    hc.rho_ = params.rho;
    hc.r_ = r;
    hc.slack_ = params.slack;
    hc.circles_ = std::move(circles);
    hc.radii_.reserve(hc.circles_.size());
    double scale = 1.0;
    int max_owner = -1;
    for (const BoundaryCircle& c : hc.circles_) {
        hc.radii_.push_back(c.radius());
        scale = std::max({scale, std::abs(c.center.x), std::abs(c.center.y), c.radius()});
        max_owner = std::max(max_owner, static_cast<int>(c.owner));
    }
    hc.margin_ = params.margin >= 0.0 ? params.margin : 1e-9 * scale;

    hc.owner_offsets_.assign(static_cast<std::size_t>(max_owner + 2), 0);
    for (const BoundaryCircle& c : hc.circles_) {
        if (c.owner >= 0) ++hc.owner_offsets_[static_cast<std::size_t>(c.owner) + 1];
    }
    std::partial_sum(hc.owner_offsets_.begin(), hc.owner_offsets_.end(), hc.owner_offsets_.begin());
    hc.owner_circles_.assign(static_cast<std::size_t>(hc.owner_offsets_.back()), 0);
    {
        std::vector<int> fill(hc.owner_offsets_.begin(), hc.owner_offsets_.end() - 1);
        for (std::size_t i = 0; i < hc.circles_.size(); ++i) {
            const auto o = hc.circles_[i].owner;
            if (o >= 0) hc.owner_circles_[static_cast<std::size_t>(fill[static_cast<std::size_t>(o)]++)] = static_cast<int>(i);
        }
    }

    std::vector<int> all(hc.circles_.size());
    std::iota(all.begin(), all.end(), 0);
    hc.levels_.push_back({hc.add_cell(PseudoTrapezoid{}, 0, -1, std::move(all))});
    if (hc.circles_.empty()) return hc;

    const int k = r <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log(r) / std::log(params.rho) - 1e-9));
    for (int level = 1; level <= k; ++level) {
        hc.levels_.emplace_back();
        const std::vector<int> parents = hc.levels_[static_cast<std::size_t>(level) - 1];
        for (int parent : parents) hc.refine(parent, level, rng, params);
    }
    return hc;
}

// --- point location and canonical subsets ----------------------------------

int HierarchicalCutting::locate_child(int cell_id, Point p) const {
    const CuttingCell& parent = cell(cell_id);
    int best = -1;
    double best_top = kInf;
    int highest = -1;
    double highest_top = -kInf;
    int nearest = -1;
    double nearest_gap = kInf;
    for (int child : parent.children) {
        const PseudoTrapezoid& s = cell(child).shape;
        if (!(s.x_lo <= p.x && p.x < s.x_hi)) {
            const double gap = p.x < s.x_lo ? s.x_lo - p.x : p.x - s.x_hi;
            if (gap < nearest_gap) {
                nearest_gap = gap;
                nearest = child;
            }
            continue;
        }
        const double top = arc_y(s.top, p.x);
        if (arc_y(s.bottom, p.x) < p.y && p.y <= top) return child;
        // Fallbacks for points that land on no child after rounding.
        if (p.y <= top && (best < 0 || top < best_top)) {
            best = child;
            best_top = top;
        }
        if (highest < 0 || top > highest_top) {
            highest = child;
            highest_top = top;
        }
    }
    if (best >= 0) return best;
    if (highest >= 0) return highest;
    return nearest;
}

void locate_points(HierarchicalCutting& hc, std::span<const Point> points,
                   std::span<const PointId> ids, bool preserve_order) {
    std::vector<PointId> order(ids.begin(), ids.end());
    if (preserve_order) std::sort(order.begin(), order.end());
    for (CuttingCell& c : hc.cells_) c.canonical_b.clear();
    for (PointId id : order) {
        const Point p = points[static_cast<std::size_t>(id)];
        int cur = 0;
        hc.cells_[0].canonical_b.push_back(id);
        for (int level = 1; level <= hc.depth(); ++level) {
            cur = hc.locate_child(cur, p);
            if (cur < 0) break;
            hc.cells_[static_cast<std::size_t>(cur)].canonical_b.push_back(id);
        }
    }
}

void locate_points(HierarchicalCutting& hc, const PointSet& points, bool preserve_order) {
    std::vector<PointId> ids(points.size());
    std::iota(ids.begin(), ids.end(), 0);
    locate_points(hc, points.points(), ids, preserve_order);
}

void compute_contained_annuli(HierarchicalCutting& hc, std::span<const Annulus> annuli) {
    const std::size_t owners = annuli.size();
    std::vector<std::uint32_t> in_child(owners, 0), seen(owners, 0);
    std::uint32_t stamp = 0;
    for (CuttingCell& c : hc.cells_) c.contained_a.clear();
    for (std::size_t pid = 0; pid < hc.cells_.size(); ++pid) {
        const CuttingCell& parent = hc.cells_[pid];
        for (int child_id : parent.children) {
            CuttingCell& child = hc.cells_[static_cast<std::size_t>(child_id)];
            ++stamp;
            for (int cid : child.conflict) {
                in_child[static_cast<std::size_t>(hc.circles_[static_cast<std::size_t>(cid)].owner)] = stamp;
            }
            for (int cid : parent.conflict) {
                const auto owner = static_cast<std::size_t>(hc.circles_[static_cast<std::size_t>(cid)].owner);
                if (owner >= owners || seen[owner] == stamp || in_child[owner] == stamp) continue;
                seen[owner] = stamp;
                if (annuli[owner].contains(child.rep)) child.contained_a.push_back(static_cast<int>(owner));
            }
            if (!std::is_sorted(child.contained_a.begin(), child.contained_a.end())) {
                std::sort(child.contained_a.begin(), child.contained_a.end());
            }
        }
    }
}

bool annulus_contains_cell(const HierarchicalCutting& hc, int annulus_id, const Annulus& annulus,
                           int cell_id) {
    const CuttingCell& c = hc.cell(cell_id);
    for (int cid : hc.circles_of(annulus_id)) {
        if (std::binary_search(c.conflict.begin(), c.conflict.end(), cid)) return false;
    }
    return annulus.contains(c.rep);
}

}  // namespace distopt
