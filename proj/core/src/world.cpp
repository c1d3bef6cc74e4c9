#include "cotsim/world.hpp"

#include <stdexcept>

namespace cotsim {

namespace {

[[noreturn]] void bad_enum(const char* what, const std::string& s) {
    throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

const char* to_string(AgentKind k) {
    switch (k) {
        case AgentKind::vehicle: return "vehicle";
        case AgentKind::pedestrian: return "pedestrian";
    }
    return "?";
}

const char* to_string(NavCommand c) {
    switch (c) {
        case NavCommand::follow: return "follow";
        case NavCommand::turn_left: return "turn_left";
        case NavCommand::turn_right: return "turn_right";
        case NavCommand::lane_change_left: return "lane_change_left";
        case NavCommand::lane_change_right: return "lane_change_right";
        case NavCommand::straight: return "straight";
    }
    return "?";
}

const char* to_string(WaypointSemantic s) {
    switch (s) {
        case WaypointSemantic::normal: return "normal";
        case WaypointSemantic::junction: return "junction";
        case WaypointSemantic::turn: return "turn";
        case WaypointSemantic::lane_change: return "lane_change";
        case WaypointSemantic::target: return "target";
    }
    return "?";
}

const char* to_string(LightState s) {
    switch (s) {
        case LightState::red: return "red";
        case LightState::yellow: return "yellow";
        case LightState::green: return "green";
        case LightState::none: return "none";
    }
    return "?";
}

const char* to_string(TriggerKind k) {
    switch (k) {
        case TriggerKind::traffic_light: return "traffic_light";
        case TriggerKind::stop_sign: return "stop_sign";
    }
    return "?";
}

const char* to_string(ScenarioType t) {
    switch (t) {
        case ScenarioType::signal_stop: return "signal_stop";
        case ScenarioType::crossing_pedestrian: return "crossing_pedestrian";
        case ScenarioType::lane_merge_cutin: return "lane_merge_cutin";
        case ScenarioType::ahead_vehicle: return "ahead_vehicle";
        case ScenarioType::sharp_turn: return "sharp_turn";
    }
    return "?";
}

AgentKind agent_kind_from_string(const std::string& s) {
    if (s == "vehicle") return AgentKind::vehicle;
    if (s == "pedestrian") return AgentKind::pedestrian;
    bad_enum("agent kind", s);
}

NavCommand nav_command_from_string(const std::string& s) {
    if (s == "follow") return NavCommand::follow;
    if (s == "turn_left") return NavCommand::turn_left;
    if (s == "turn_right") return NavCommand::turn_right;
    if (s == "lane_change_left") return NavCommand::lane_change_left;
    if (s == "lane_change_right") return NavCommand::lane_change_right;
    if (s == "straight") return NavCommand::straight;
    bad_enum("nav command", s);
}

WaypointSemantic waypoint_semantic_from_string(const std::string& s) {
    if (s == "normal") return WaypointSemantic::normal;
    if (s == "junction") return WaypointSemantic::junction;
    if (s == "turn") return WaypointSemantic::turn;
    if (s == "lane_change") return WaypointSemantic::lane_change;
    if (s == "target") return WaypointSemantic::target;
    bad_enum("waypoint semantic", s);
}

LightState light_state_from_string(const std::string& s) {
    if (s == "red") return LightState::red;
    if (s == "yellow") return LightState::yellow;
    if (s == "green") return LightState::green;
    if (s == "none") return LightState::none;
    bad_enum("light state", s);
}

TriggerKind trigger_kind_from_string(const std::string& s) {
    if (s == "traffic_light") return TriggerKind::traffic_light;
    if (s == "stop_sign") return TriggerKind::stop_sign;
    bad_enum("trigger kind", s);
}

ScenarioType scenario_type_from_string(const std::string& s) {
    if (s == "signal_stop") return ScenarioType::signal_stop;
    if (s == "crossing_pedestrian") return ScenarioType::crossing_pedestrian;
    if (s == "lane_merge_cutin") return ScenarioType::lane_merge_cutin;
    if (s == "ahead_vehicle") return ScenarioType::ahead_vehicle;
    if (s == "sharp_turn") return ScenarioType::sharp_turn;
    bad_enum("scenario type", s);
}

}  // namespace cotsim
