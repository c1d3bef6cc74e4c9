#include "cotsim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace cotsim {

namespace {

// Projection radius of a box onto a unit axis.
double projected_radius(const OBB2D& box, const Vec2& axis) {
    const Vec2 fwd = box.center.heading();
    const Vec2 left{-fwd.y, fwd.x};
    return box.half_length * std::abs(fwd.dot(axis)) + box.half_width * std::abs(left.dot(axis));
}

bool separated_on_axis(const OBB2D& a, const OBB2D& b, const Vec2& axis) {
    const Vec2 d = b.center.position() - a.center.position();
    const double dist = std::abs(d.dot(axis));
    return dist > projected_radius(a, axis) + projected_radius(b, axis);
}

}  // namespace

bool obb_overlap(const OBB2D& a, const OBB2D& b) {
    const Vec2 fa = a.center.heading();
    const Vec2 fb = b.center.heading();
    const Vec2 axes[4] = {fa, {-fa.y, fa.x}, fb, {-fb.y, fb.x}};
    for (const Vec2& axis : axes) {
        if (separated_on_axis(a, b, axis)) {
            return false;
        }
    }
    return true;
}

double obb_min_distance(const OBB2D& a, const OBB2D& b) {
    if (obb_overlap(a, b)) {
        return 0.0;
    }
    // Disjoint convex polygons: the minimum gap is attained between a vertex
    // of one and an edge (or vertex) of the other.
    const auto ca = a.corners();
    const auto cb = b.corners();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const Vec2& a0 = ca[static_cast<std::size_t>(i)];
        const Vec2& a1 = ca[static_cast<std::size_t>((i + 1) % 4)];
        for (int j = 0; j < 4; ++j) {
            const Vec2& b0 = cb[static_cast<std::size_t>(j)];
            const Vec2& b1 = cb[static_cast<std::size_t>((j + 1) % 4)];
            best = std::min(best, point_segment_distance(b0, a0, a1));
            best = std::min(best, point_segment_distance(a0, b0, b1));
        }
    }
    return best;
}

}  // namespace cotsim
