#pragma once

#include <vector>

#include "distopt/core.hpp"

namespace testutil {

inline distopt::PointSet uniform_points(std::size_t n, distopt::Rng& rng, double side = 1.0) {
    std::vector<distopt::Point> v(n);
    for (auto& p : v) p = {side * rng.unit(), side * rng.unit()};
    return distopt::PointSet(std::move(v));
}

/// Points on a small integer lattice, so distances repeat and points coincide.
inline distopt::PointSet lattice_points(std::size_t n, distopt::Rng& rng, int span) {
    std::vector<distopt::Point> v(n);
    for (auto& p : v) {
        p = {static_cast<double>(rng.below(static_cast<std::uint64_t>(span))),
             static_cast<double>(rng.below(static_cast<std::uint64_t>(span)))};
    }
    return distopt::PointSet(std::move(v));
}

inline distopt::PointSet unit_square() {
    return distopt::PointSet({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

inline distopt::PointSet chain(int n) {
    std::vector<distopt::Point> v;
    for (int i = 0; i < n; ++i) v.push_back({static_cast<double>(i), 0.0});
    return distopt::PointSet(std::move(v));
}

}  // namespace testutil
