#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "cotsim/waypoints.hpp"

using namespace cotsim;

namespace {

std::vector<RouteWaypoint> straight_route(double length, double spacing = 10.0) {
    std::vector<RouteWaypoint> sparse;
    for (double x = 0.0; x <= length + 1e-9; x += spacing) {
        RouteWaypoint wp;
        wp.position = {x, 0.0};
        wp.lane_id = "l0";
        sparse.push_back(wp);
    }
    return sparse;
}

}  // namespace

TEST_CASE("straight 10 m segment densifies to 11 integer points") {
    std::vector<RouteWaypoint> sparse(2);
    sparse[0].position = {0, 0};
    sparse[1].position = {10, 0};
    const auto dense = densify_route(sparse);
    REQUIRE(dense.size() == 11);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        CHECK(dense[i].position.x == doctest::Approx(static_cast<double>(i)).epsilon(1e-12));
        CHECK(dense[i].arc_length == doctest::Approx(static_cast<double>(i)));
    }
}

TEST_CASE("single point route is rejected") {
    std::vector<RouteWaypoint> one(1);
    CHECK_THROWS_AS(densify_route(one), std::invalid_argument);
}

TEST_CASE("zero-length route is rejected") {
    std::vector<RouteWaypoint> two(2);
    two[0].position = {1, 1};
    two[1].position = {1, 1};
    CHECK_THROWS_AS(densify_route(two), std::invalid_argument);
}

TEST_CASE("L-shaped route keeps 1 m spacing and increasing arc length") {
    std::vector<RouteWaypoint> sparse(3);
    sparse[0].position = {0, 0};
    sparse[0].semantic = WaypointSemantic::normal;
    sparse[1].position = {12.5, 0};
    sparse[1].semantic = WaypointSemantic::turn;
    sparse[2].position = {12.5, 20.0};

    const auto dense = densify_route(sparse);
    double accumulated = 0.0;
    for (std::size_t i = 1; i < dense.size(); ++i) {
        const double step = (dense[i].position - dense[i - 1].position).norm();
        // spacing along the polyline: 1 m except across the corner where the
        // chord is shorter, while arc length still advances exactly 1 m
        CHECK(dense[i].arc_length - dense[i - 1].arc_length == doctest::Approx(1.0));
        CHECK(dense[i].arc_length > dense[i - 1].arc_length);
        CHECK(step <= 1.0 + 1e-6);
        accumulated += step;
    }
    // all but the corner-spanning step are exact
    int short_steps = 0;
    for (std::size_t i = 1; i < dense.size(); ++i) {
        if ((dense[i].position - dense[i - 1].position).norm() < 1.0 - 1e-6) {
            ++short_steps;
        }
    }
    CHECK(short_steps <= 1);
}

TEST_CASE("semantics inherit from the governing sparse segment") {
    std::vector<RouteWaypoint> sparse(3);
    sparse[0].position = {0, 0};
    sparse[0].semantic = WaypointSemantic::normal;
    sparse[0].lane_id = "a";
    sparse[1].position = {5, 0};
    sparse[1].semantic = WaypointSemantic::turn;
    sparse[1].lane_id = "b";
    sparse[2].position = {10, 0};

    const auto dense = densify_route(sparse);
    REQUIRE(dense.size() == 11);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(dense[i].semantic == WaypointSemantic::normal);
        CHECK(dense[i].lane_id == "a");
    }
    for (std::size_t i = 5; i < 11; ++i) {
        CHECK(dense[i].semantic == WaypointSemantic::turn);
        CHECK(dense[i].lane_id == "b");
    }
}

TEST_CASE("first_waypoint_distance formula branches") {
    CHECK(first_waypoint_distance(10.0) == 4.0);
    CHECK(first_waypoint_distance(0.0) == 4.0);
    CHECK(first_waypoint_distance(19.999) == 4.0);
    CHECK(first_waypoint_distance(72.0) == doctest::Approx(12.0));
    CHECK(first_waypoint_distance(20.0) == doctest::Approx(0.5 * (20.0 / 3.6) + 2.0));
    CHECK(first_waypoint_distance(20.0) == doctest::Approx(4.777777777777778));
    CHECK_THROWS_AS(first_waypoint_distance(-1.0), std::invalid_argument);
}

TEST_CASE("lookahead is monotone in speed") {
    double prev = 0.0;
    for (double v = 0.0; v <= 130.0; v += 0.5) {
        const double d = first_waypoint_distance(v);
        CHECK(d >= prev);
        prev = d;
    }
}

TEST_CASE("planned waypoints on a straight route from standstill") {
    const auto dense = densify_route(straight_route(100.0));
    EgoState ego;
    ego.pose = {0.0, 0.0, 0.0};
    ego.speed_mps = 0.0;
    const PlannedPath plan = plan_waypoints(ego, dense);
    CHECK(plan.first_point_distance == 4.0);
    for (int k = 0; k < kPlannedWaypointCount; ++k) {
        CHECK(plan.waypoints[static_cast<std::size_t>(k)].x == doctest::Approx(4.0 + k));
        CHECK(plan.waypoints[static_cast<std::size_t>(k)].y == doctest::Approx(0.0));
    }
    CHECK_FALSE(plan.padded);
}

TEST_CASE("curved route world->local->world round trip") {
    std::vector<RouteWaypoint> sparse(4);
    sparse[0].position = {0, 0};
    sparse[1].position = {30, 5};
    sparse[2].position = {50, 25};
    sparse[3].position = {60, 60};
    const auto dense = densify_route(sparse);

    EgoState ego;
    ego.pose = {2.0, 1.0, 0.4};
    ego.speed_mps = 15.0;
    const PlannedPath plan = plan_waypoints(ego, dense);

    const std::size_t proj = plan.projection_index;
    const double s0 = dense[proj].arc_length;
    for (int k = 0; k < kPlannedWaypointCount; ++k) {
        const Vec2 world = ego.pose.to_world(plan.waypoints[static_cast<std::size_t>(k)]);
        const Vec2 expect = sample_route(dense, s0 + plan.first_point_distance + k);
        CHECK(world.x == doctest::Approx(expect.x).epsilon(1e-9));
        CHECK(world.y == doctest::Approx(expect.y).epsilon(1e-9));
    }
}

TEST_CASE("route end pads by extrapolating the final heading") {
    const auto dense = densify_route(straight_route(20.0));
    EgoState ego;
    ego.pose = {18.0, 0.0, 0.0};
    ego.speed_mps = 10.0;  // 36 km/h -> d_wpt = 7
    const PlannedPath plan = plan_waypoints(ego, dense);
    CHECK(plan.padded);
    for (int k = 0; k < kPlannedWaypointCount; ++k) {
        CHECK(plan.waypoints[static_cast<std::size_t>(k)].x ==
              doctest::Approx(plan.first_point_distance + k));
        CHECK(plan.waypoints[static_cast<std::size_t>(k)].y == doctest::Approx(0.0));
    }
}

TEST_CASE("forward-progress tie break never moves the projection backward") {
    const auto dense = densify_route(straight_route(50.0));
    const std::size_t first = project_onto_route({25.0, 0.5}, dense, 0);
    CHECK(first == 25);
    // the same point with a later cursor stays at or after the cursor
    CHECK(project_onto_route({25.0, 0.5}, dense, 30) >= 30);
}
