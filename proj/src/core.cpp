#include "distopt/core.hpp"

#include <algorithm>

namespace distopt {

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.size() > static_cast<std::size_t>(std::numeric_limits<PointId>::max())) {
        throw InvalidInput("point set too large");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
            throw InvalidInput("point " + std::to_string(i) + " has a non-finite coordinate");
        }
    }
}

PointSequence::PointSequence(std::vector<Point> points) : PointSet(std::move(points)) {
    if (empty()) throw InvalidInput("point sequence must contain at least one point");
}

double coordinate_scale(std::span<const Point> pts) {
    double s = 1.0;
    for (const Point& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return s;
}

}  // namespace distopt
