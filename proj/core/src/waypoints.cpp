#include "cotsim/waypoints.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cotsim {

std::vector<RouteWaypoint> densify_route(const std::vector<RouteWaypoint>& sparse) {
    if (sparse.size() < 2) {
        throw std::invalid_argument("densify_route: route needs at least 2 waypoints");
    }

    // cumulative arc lengths of the sparse polyline
    std::vector<double> cum(sparse.size(), 0.0);
    for (std::size_t i = 1; i < sparse.size(); ++i) {
        cum[i] = cum[i - 1] + (sparse[i].position - sparse[i - 1].position).norm();
    }
    const double total = cum.back();
    if (total <= 0.0) {
        throw std::invalid_argument("densify_route: zero-length route");
    }

    std::vector<RouteWaypoint> dense;
    const int count = static_cast<int>(std::floor(total + 1e-9)) + 1;
    dense.reserve(static_cast<std::size_t>(count));

    std::size_t seg = 0;
    for (int k = 0; k < count; ++k) {
        const double s = static_cast<double>(k);
        while (seg + 2 < sparse.size() && s >= cum[seg + 1]) {
            ++seg;
        }
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
        RouteWaypoint wp;
        wp.position = sparse[seg].position + (sparse[seg + 1].position - sparse[seg].position) * t;
        wp.semantic = sparse[seg].semantic;
        wp.lane_id = sparse[seg].lane_id;
        wp.arc_length = s;
        dense.push_back(std::move(wp));
    }
    return dense;
}

double first_waypoint_distance(double speed_kmh) {
    if (speed_kmh < 0.0) {
        throw std::invalid_argument("first_waypoint_distance: negative speed");
    }
    if (speed_kmh < 20.0) {
        return 4.0;
    }
    return 0.5 * (speed_kmh / 3.6) + 2.0;
}

std::size_t project_onto_route(const Vec2& point, const std::vector<RouteWaypoint>& dense,
                               std::size_t min_index) {
    if (dense.empty()) {
        throw std::invalid_argument("project_onto_route: empty route");
    }
    if (min_index >= dense.size()) {
        return dense.size() - 1;
    }
    std::size_t best = min_index;
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = min_index; i < dense.size(); ++i) {
        const double d = (dense[i].position - point).norm_sq();
        if (d <= best_sq) {  // <= breaks ties toward forward progress
            best_sq = d;
            best = i;
        }
    }
    return best;
}

Vec2 sample_route(const std::vector<RouteWaypoint>& dense, double s, bool* extrapolated) {
    if (dense.size() < 2) {
        throw std::invalid_argument("sample_route: route needs at least 2 points");
    }
    if (extrapolated != nullptr) {
        *extrapolated = false;
    }
    const double total = dense.back().arc_length;
    if (s <= 0.0) {
        return dense.front().position + (dense[1].position - dense[0].position) * s;
    }
    if (s >= total) {
        if (extrapolated != nullptr && s > total) {
            *extrapolated = true;
        }
        const Vec2 dir = dense[dense.size() - 1].position - dense[dense.size() - 2].position;
        const double len = dir.norm();
        const Vec2 unit = len > 0.0 ? dir * (1.0 / len) : Vec2{1.0, 0.0};
        return dense.back().position + unit * (s - total);
    }
    const auto i = static_cast<std::size_t>(std::floor(s));
    const double frac = s - static_cast<double>(i);
    return dense[i].position + (dense[i + 1].position - dense[i].position) * frac;
}

PlannedPath plan_waypoints(const EgoState& ego, const std::vector<RouteWaypoint>& dense,
                           std::size_t min_index) {
    PlannedPath out;
    out.projection_index = project_onto_route(ego.pose.position(), dense, min_index);
    const double s0 = dense[out.projection_index].arc_length;
    out.first_point_distance = first_waypoint_distance(ego.speed_kmh());

    for (int k = 0; k < kPlannedWaypointCount; ++k) {
        bool extrapolated = false;
        const Vec2 world = sample_route(dense, s0 + out.first_point_distance + k, &extrapolated);
        out.padded = out.padded || extrapolated;
        out.waypoints[static_cast<std::size_t>(k)] = ego.pose.to_local(world);
    }
    return out;
}

}  // namespace cotsim
