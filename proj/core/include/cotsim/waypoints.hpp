#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cotsim/geometry.hpp"
#include "cotsim/world.hpp"

namespace cotsim {

inline constexpr int kPlannedWaypointCount = 10;

/// Ten ego-local route points at 1 m spacing, starting a speed-dependent
/// lookahead distance ahead of the ego's route projection.
struct PlannedPath {
    std::array<Vec2, kPlannedWaypointCount> waypoints{};  // ego frame, x forward / y left
    double first_point_distance = 0.0;                    // m along the route
    bool padded = false;              // end-of-route heading extrapolation used
    std::size_t projection_index = 0; // dense waypoint the ego projected onto
};

/// Linear interpolation of the sparse route at 1.0 m arc-length steps.
/// Semantics and lane ids are inherited from the governing sparse segment.
/// Throws on fewer than two points or a zero-length route.
std::vector<RouteWaypoint> densify_route(const std::vector<RouteWaypoint>& sparse);

/// Speed-dependent lookahead: 4 m below 20 km/h, else 0.5*(v/3.6) + 2.
/// Throws on negative speed.
double first_waypoint_distance(double speed_kmh);

/// Nearest dense waypoint to `point` at index >= min_index, with ties broken
/// toward forward progress.
std::size_t project_onto_route(const Vec2& point, const std::vector<RouteWaypoint>& dense,
                               std::size_t min_index = 0);

/// World-frame point at arc length s along the dense route; extrapolates the
/// final heading past the route end (sets *extrapolated when provided).
Vec2 sample_route(const std::vector<RouteWaypoint>& dense, double s, bool* extrapolated = nullptr);

PlannedPath plan_waypoints(const EgoState& ego, const std::vector<RouteWaypoint>& dense,
                           std::size_t min_index = 0);

}  // namespace cotsim
