#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cotsim/geometry.hpp"

namespace cotsim {

enum class AgentKind { vehicle, pedestrian };

/// One simulated traffic participant. Pedestrians always have steer = 0 and
/// default to a 0.5 m x 0.5 m footprint.
struct AgentState {
    std::string id;
    AgentKind kind = AgentKind::vehicle;
    Pose2D pose;
    double speed = 0.0;  // m/s, >= 0
    double steer = 0.0;  // rad
    double accel = 0.0;  // m/s^2
    double half_length = 2.4;
    double half_width = 1.0;
    std::string lane_id;

    OBB2D box() const { return {pose, half_length, half_width}; }

    friend bool operator==(const AgentState&, const AgentState&) = default;
};

enum class NavCommand { follow, turn_left, turn_right, lane_change_left, lane_change_right, straight };

/// Ego vehicle state. Speed is stored once, in m/s; km/h (the unit used by
/// the safety-distance and lookahead formulas) is derived at the boundary.
struct EgoState {
    Pose2D pose;
    double speed_mps = 0.0;
    double half_length = 2.4;
    double half_width = 1.0;
    std::string lane_id;
    std::string road_id;
    NavCommand nav_command = NavCommand::follow;

    double speed_kmh() const { return mps_to_kmh(speed_mps); }
    OBB2D box() const { return {pose, half_length, half_width}; }

    friend bool operator==(const EgoState&, const EgoState&) = default;
};

enum class WaypointSemantic { normal, junction, turn, lane_change, target };

struct RouteWaypoint {
    Vec2 position;
    WaypointSemantic semantic = WaypointSemantic::normal;
    std::string lane_id;
    double arc_length = 0.0;  // cumulative, strictly increasing along the route

    friend bool operator==(const RouteWaypoint&, const RouteWaypoint&) = default;
};

enum class LightState { red, yellow, green, none };
enum class TriggerKind { traffic_light, stop_sign };

/// Oriented box bound to road/lane pairs. light_state is none iff the
/// volume belongs to a stop sign.
struct TriggerVolume {
    std::string id;
    OBB2D box;
    TriggerKind kind = TriggerKind::traffic_light;
    std::vector<std::pair<std::string, std::string>> affected_lanes;  // (road_id, lane_id)
    LightState light_state = LightState::none;

    friend bool operator==(const TriggerVolume&, const TriggerVolume&) = default;
};

/// Hold (accel, steer) each frame; set_speed overrides the agent speed on
/// the frame the behavior becomes active.
struct ConstantAction {
    double accel = 0.0;
    double steer = 0.0;
    std::optional<double> set_speed;

    friend bool operator==(const ConstantAction&, const ConstantAction&) = default;
};

/// Pure-pursuit tracking of a fixed polyline at a target speed.
struct WaypointFollow {
    std::vector<Vec2> path;
    double speed = 0.0;  // m/s

    friend bool operator==(const WaypointFollow&, const WaypointFollow&) = default;
};

/// Dormant until the ego vehicle comes within trigger_distance, then the
/// inner behavior takes over on that exact frame.
struct Triggered {
    double trigger_distance = 0.0;  // > 0
    std::variant<ConstantAction, WaypointFollow> then;

    friend bool operator==(const Triggered&, const Triggered&) = default;
};

using Behavior = std::variant<ConstantAction, WaypointFollow, Triggered>;

struct AgentScript {
    AgentState initial;
    Behavior behavior;

    friend bool operator==(const AgentScript&, const AgentScript&) = default;
};

enum class ScenarioType { signal_stop, crossing_pedestrian, lane_merge_cutin, ahead_vehicle, sharp_turn };

/// Initial ego configuration; position and heading come from the route start.
struct EgoSetup {
    double speed_kmh = 0.0;
    NavCommand nav_command = NavCommand::follow;
    std::string road_id = "r0";
    double half_length = 2.4;
    double half_width = 1.0;

    friend bool operator==(const EgoSetup&, const EgoSetup&) = default;
};

struct ScenarioSpec {
    std::string scenario_id;
    ScenarioType scenario_type = ScenarioType::ahead_vehicle;
    std::string weather = "clear";
    std::string time_of_day = "noon";
    double speed_limit_kmh = 50.0;
    double duration_cap_s = 20.0;
    Vec2 trigger_point;
    std::vector<RouteWaypoint> route;  // sparse, pre-densification
    std::vector<AgentScript> agents;
    std::vector<TriggerVolume> trigger_volumes;
    EgoSetup ego;

    /// Non-fatal findings from load-time validation, e.g. a trigger volume
    /// referencing a lane absent from the route.
    std::vector<std::string> warnings;
};

const char* to_string(AgentKind k);
const char* to_string(NavCommand c);
const char* to_string(WaypointSemantic s);
const char* to_string(LightState s);
const char* to_string(TriggerKind k);
const char* to_string(ScenarioType t);

AgentKind agent_kind_from_string(const std::string& s);
NavCommand nav_command_from_string(const std::string& s);
WaypointSemantic waypoint_semantic_from_string(const std::string& s);
LightState light_state_from_string(const std::string& s);
TriggerKind trigger_kind_from_string(const std::string& s);
ScenarioType scenario_type_from_string(const std::string& s);

}  // namespace cotsim
