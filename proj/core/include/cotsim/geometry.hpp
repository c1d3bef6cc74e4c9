#pragma once

#include <array>
#include <cmath>

namespace cotsim {

inline constexpr double kPi = 3.14159265358979323846;

/// Reduce an angle to the canonical (-pi, pi] range. Throws on non-finite input.
double normalize_yaw(double angle);

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }
inline double mps_to_kmh(double mps) { return mps * 3.6; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Planar pose: world-frame position plus heading in (-pi, pi].
struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 heading() const { return {std::cos(yaw), std::sin(yaw)}; }

    /// World point expressed in this pose's frame (x forward, y left).
    Vec2 to_local(const Vec2& world) const {
        const double dx = world.x - x;
        const double dy = world.y - y;
        const double c = std::cos(yaw), s = std::sin(yaw);
        return {c * dx + s * dy, -s * dx + c * dy};
    }

    /// Local point expressed in the world frame.
    Vec2 to_world(const Vec2& local) const {
        const double c = std::cos(yaw), s = std::sin(yaw);
        return {x + c * local.x - s * local.y, y + s * local.x + c * local.y};
    }

    friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Oriented box: center pose plus strictly positive half extents.
/// half_length runs along the heading, half_width across it.
struct OBB2D {
    Pose2D center;
    double half_length = 0.0;
    double half_width = 0.0;

    std::array<Vec2, 4> corners() const;

    friend bool operator==(const OBB2D&, const OBB2D&) = default;
};

/// Closed-set intersection test over the four separating-axis candidates.
/// Touching boxes (zero gap) count as overlapping.
bool obb_overlap(const OBB2D& a, const OBB2D& b);

/// Minimal Euclidean gap between the box boundaries; exactly 0 iff they overlap.
double obb_min_distance(const OBB2D& a, const OBB2D& b);

/// Distance from a point to a segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace cotsim
