#include "cotsim/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace cotsim {

double normalize_yaw(double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("normalize_yaw: non-finite angle");
    }
    // remainder() maps into [-pi, pi]; fold the open edge -pi onto +pi.
    double r = std::remainder(angle, 2.0 * kPi);
    if (r <= -kPi) {
        r += 2.0 * kPi;
    }
    return r;
}

std::array<Vec2, 4> OBB2D::corners() const {
    const Vec2 fwd = center.heading();
    const Vec2 left{-fwd.y, fwd.x};
    const Vec2 c = center.position();
    const Vec2 dl = fwd * half_length;
    const Vec2 dw = left * half_width;
    return {c + dl + dw, c + dl - dw, c - dl - dw, c - dl + dw};
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq == 0.0) {
        return (p - a).norm();
    }
    double t = (p - a).dot(ab) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace cotsim
