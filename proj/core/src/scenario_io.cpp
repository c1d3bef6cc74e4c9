#include "cotsim/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cotsim/toml_lite.hpp"

namespace cotsim {

namespace {

using toml::Table;
using toml::Value;

std::string fmt_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

// -- typed field access with diagnostics ------------------------------------

[[noreturn]] void missing(const std::string& ctx, const std::string& key, int line) {
    throw toml::ParseError(line, ctx + ": missing key '" + key + "'");
}

const Value& require(const Table& t, const std::string& ctx, const std::string& key, int line) {
    const Value* v = toml::find(t, key);
    if (v == nullptr) missing(ctx, key, line);
    return *v;
}

double get_number(const Table& t, const std::string& ctx, const std::string& key, int line) {
    const Value& v = require(t, ctx, key, line);
    if (!v.is_number()) throw toml::ParseError(v.line, ctx + ": key '" + key + "' must be a number");
    return v.as_number();
}

double get_number_or(const Table& t, const std::string& key, double fallback) {
    const Value* v = toml::find(t, key);
    if (v == nullptr) return fallback;
    return v->as_number();
}

std::string get_string(const Table& t, const std::string& ctx, const std::string& key, int line) {
    const Value& v = require(t, ctx, key, line);
    if (!v.is_string()) throw toml::ParseError(v.line, ctx + ": key '" + key + "' must be a string");
    return v.as_string();
}

std::string get_string_or(const Table& t, const std::string& key, const std::string& fallback) {
    const Value* v = toml::find(t, key);
    if (v == nullptr) return fallback;
    return v->as_string();
}

void reject_unknown_keys(const Table& t, const std::string& ctx,
                         std::initializer_list<const char*> known) {
    for (const auto& [key, value] : t) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end()) {
            throw toml::ParseError(value.line, ctx + ": unknown key '" + key + "'");
        }
    }
}

Vec2 get_point(const Value& v, const std::string& ctx) {
    if (!v.is_array() || v.as_array().size() != 2 || !v.as_array()[0].is_number() ||
        !v.as_array()[1].is_number()) {
        throw toml::ParseError(v.line, ctx + ": expected a [x, y] pair");
    }
    return {v.as_array()[0].as_number(), v.as_array()[1].as_number()};
}

// -- scenario sections -------------------------------------------------------

RouteWaypoint parse_route_point(const Table& t, int line) {
    reject_unknown_keys(t, "route waypoint", {"x", "y", "semantic", "lane_id"});
    RouteWaypoint wp;
    wp.position = {get_number(t, "route waypoint", "x", line), get_number(t, "route waypoint", "y", line)};
    wp.semantic = waypoint_semantic_from_string(get_string_or(t, "semantic", "normal"));
    wp.lane_id = get_string_or(t, "lane_id", "l0");
    return wp;
}

ConstantAction parse_constant_action(const Table& t, const std::string& prefix) {
    ConstantAction a;
    a.accel = get_number_or(t, prefix + "accel", 0.0);
    a.steer = get_number_or(t, prefix + "steer", 0.0);
    if (const Value* v = toml::find(t, prefix + "set_speed"); v != nullptr) {
        a.set_speed = v->as_number();
    }
    return a;
}

WaypointFollow parse_waypoint_follow(const Table& t, const std::string& prefix, int line) {
    WaypointFollow f;
    f.speed = get_number(t, "agent behavior", prefix + "target_speed", line);
    const Value& path = require(t, "agent behavior", prefix + "path", line);
    if (!path.is_array()) throw toml::ParseError(path.line, "agent behavior: path must be an array");
    for (const Value& p : path.as_array()) {
        f.path.push_back(get_point(p, "agent path point"));
    }
    if (f.path.size() < 2) {
        throw ValidationError("agent behavior: waypoint_follow path needs >= 2 points");
    }
    return f;
}

AgentScript parse_agent(const Table& t, int line) {
    reject_unknown_keys(t, "agent",
                        {"id", "kind", "x", "y", "yaw", "speed", "steer", "accel", "half_length",
                         "half_width", "lane_id", "behavior", "set_speed", "path", "target_speed",
                         "trigger_distance", "then_behavior", "then_accel", "then_steer",
                         "then_set_speed", "then_path", "then_target_speed"});
    AgentScript script;
    AgentState& a = script.initial;
    a.id = get_string(t, "agent", "id", line);
    a.kind = agent_kind_from_string(get_string_or(t, "kind", "vehicle"));
    a.pose.x = get_number(t, "agent", "x", line);
    a.pose.y = get_number(t, "agent", "y", line);
    a.pose.yaw = normalize_yaw(get_number_or(t, "yaw", 0.0));
    a.speed = get_number_or(t, "speed", 0.0);
    a.steer = get_number_or(t, "steer", 0.0);
    a.accel = get_number_or(t, "accel", 0.0);
    const bool ped = a.kind == AgentKind::pedestrian;
    a.half_length = get_number_or(t, "half_length", ped ? 0.25 : 2.4);
    a.half_width = get_number_or(t, "half_width", ped ? 0.25 : 1.0);
    a.lane_id = get_string_or(t, "lane_id", "");

    if (a.speed < 0.0) throw ValidationError("agent '" + a.id + "': speed must be >= 0");
    if (a.half_length <= 0.0 || a.half_width <= 0.0) {
        throw ValidationError("agent '" + a.id + "': extents must be positive");
    }
    if (ped && a.steer != 0.0) {
        throw ValidationError("agent '" + a.id + "': pedestrians must have steer = 0");
    }

    const std::string behavior = get_string_or(t, "behavior", "constant_action");
    if (behavior == "constant_action") {
        script.behavior = parse_constant_action(t, "");
    } else if (behavior == "waypoint_follow") {
        script.behavior = WaypointFollow(parse_waypoint_follow(t, "", line));
    } else if (behavior == "triggered") {
        Triggered trig;
        trig.trigger_distance = get_number(t, "agent", "trigger_distance", line);
        if (trig.trigger_distance <= 0.0) {
            throw ValidationError("agent '" + a.id + "': trigger_distance must be > 0");
        }
        const std::string then = get_string(t, "agent", "then_behavior", line);
        if (then == "constant_action") {
            trig.then = parse_constant_action(t, "then_");
        } else if (then == "waypoint_follow") {
            trig.then = parse_waypoint_follow(t, "then_", line);
        } else {
            throw ValidationError("agent '" + a.id + "': unknown then_behavior '" + then + "'");
        }
        script.behavior = std::move(trig);
    } else {
        throw ValidationError("agent '" + a.id + "': unknown behavior '" + behavior + "'");
    }
    return script;
}

TriggerVolume parse_volume(const Table& t, int line) {
    reject_unknown_keys(t, "trigger volume",
                        {"id", "kind", "x", "y", "yaw", "half_length", "half_width", "light_state",
                         "affected_lanes"});
    TriggerVolume v;
    v.id = get_string(t, "trigger volume", "id", line);
    v.kind = trigger_kind_from_string(get_string_or(t, "kind", "traffic_light"));
    v.box.center.x = get_number(t, "trigger volume", "x", line);
    v.box.center.y = get_number(t, "trigger volume", "y", line);
    v.box.center.yaw = normalize_yaw(get_number_or(t, "yaw", 0.0));
    v.box.half_length = get_number(t, "trigger volume", "half_length", line);
    v.box.half_width = get_number(t, "trigger volume", "half_width", line);
    v.light_state = light_state_from_string(
        get_string_or(t, "light_state", v.kind == TriggerKind::stop_sign ? "none" : "red"));

    if (v.box.half_length <= 0.0 || v.box.half_width <= 0.0) {
        throw ValidationError("trigger volume '" + v.id + "': extents must be positive");
    }
    if ((v.light_state == LightState::none) != (v.kind == TriggerKind::stop_sign)) {
        throw ValidationError("trigger volume '" + v.id +
                              "': light_state must be none iff kind is stop_sign");
    }

    const Value& lanes = require(t, "trigger volume", "affected_lanes", line);
    if (!lanes.is_array()) {
        throw toml::ParseError(lanes.line, "trigger volume: affected_lanes must be an array");
    }
    for (const Value& pair : lanes.as_array()) {
        if (!pair.is_array() || pair.as_array().size() != 2 || !pair.as_array()[0].is_string() ||
            !pair.as_array()[1].is_string()) {
            throw toml::ParseError(pair.line,
                                   "trigger volume: affected_lanes entries are [road_id, lane_id]");
        }
        v.affected_lanes.emplace_back(pair.as_array()[0].as_string(), pair.as_array()[1].as_string());
    }
    return v;
}

EgoSetup parse_ego(const Table& t) {
    reject_unknown_keys(t, "ego", {"speed_kmh", "nav_command", "road_id", "half_length", "half_width"});
    EgoSetup ego;
    ego.speed_kmh = get_number_or(t, "speed_kmh", 0.0);
    ego.nav_command = nav_command_from_string(get_string_or(t, "nav_command", "follow"));
    ego.road_id = get_string_or(t, "road_id", "r0");
    ego.half_length = get_number_or(t, "half_length", 2.4);
    ego.half_width = get_number_or(t, "half_width", 1.0);
    if (ego.speed_kmh < 0.0) throw ValidationError("ego: speed_kmh must be >= 0");
    if (ego.half_length <= 0.0 || ego.half_width <= 0.0) {
        throw ValidationError("ego: extents must be positive");
    }
    return ego;
}

// Flattens a [config] subtree into sorted dotted-key overrides.
void flatten_config(const Table& t, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
    for (const auto& [key, value] : t) {
        const std::string dotted = prefix.empty() ? key : prefix + "." + key;
        if (value.is_table()) {
            flatten_config(value.as_table(), dotted, out);
        } else if (value.is_number()) {
            out.emplace_back(dotted, fmt_number(value.as_number()));
        } else if (value.is_bool()) {
            out.emplace_back(dotted, value.as_bool() ? "true" : "false");
        } else {
            throw toml::ParseError(value.line, "config: key '" + dotted + "' must be a number or bool");
        }
    }
}

void validate(ScenarioSpec& spec) {
    if (spec.route.size() < 2) {
        throw ValidationError("scenario '" + spec.scenario_id + "': route has >= 2 waypoints violated");
    }
    if (!(spec.duration_cap_s > 0.0)) {
        throw ValidationError("scenario '" + spec.scenario_id + "': duration_cap_s > 0 violated");
    }
    if (spec.speed_limit_kmh < 0.0) {
        throw ValidationError("scenario '" + spec.scenario_id + "': speed_limit_kmh must be >= 0");
    }
    double cum = 0.0;
    for (std::size_t i = 1; i < spec.route.size(); ++i) {
        const double d = (spec.route[i].position - spec.route[i - 1].position).norm();
        if (d <= 0.0) {
            throw ValidationError("scenario '" + spec.scenario_id +
                                  "': route arc_length strictly increasing violated (duplicate point " +
                                  std::to_string(i) + ")");
        }
        cum += d;
        spec.route[i].arc_length = cum;
    }

    std::set<std::string> ids;
    for (const AgentScript& s : spec.agents) {
        if (!ids.insert(s.initial.id).second) {
            throw ValidationError("scenario '" + spec.scenario_id + "': duplicate agent id '" +
                                  s.initial.id + "'");
        }
    }

    // flag trigger-volume lanes that the route never uses
    std::set<std::pair<std::string, std::string>> route_lanes;
    route_lanes.emplace(spec.ego.road_id, spec.route.front().lane_id);
    for (const RouteWaypoint& wp : spec.route) {
        route_lanes.emplace(spec.ego.road_id, wp.lane_id);
    }
    for (const TriggerVolume& v : spec.trigger_volumes) {
        for (const auto& lane : v.affected_lanes) {
            if (route_lanes.find(lane) == route_lanes.end()) {
                spec.warnings.push_back("trigger volume '" + v.id + "' references lane (" +
                                        lane.first + ", " + lane.second +
                                        ") absent from the route");
            }
        }
    }
}

}  // namespace

LoadedScenario load_scenario_string(const std::string& text, const std::string& name) {
    Table root;
    try {
        root = toml::parse(text);
    } catch (const toml::ParseError& e) {
        throw toml::ParseError(e.line(), name + ": " + e.what());
    }

    reject_unknown_keys(root, "scenario",
                        {"scenario_id", "scenario_type", "weather", "time_of_day", "speed_limit_kmh",
                         "duration_cap_s", "trigger_point", "route", "agents", "trigger_volumes",
                         "ego", "config"});

    LoadedScenario out;
    ScenarioSpec& spec = out.spec;
    spec.scenario_id = get_string(root, "scenario", "scenario_id", 1);
    spec.scenario_type = scenario_type_from_string(get_string(root, "scenario", "scenario_type", 1));
    spec.weather = get_string_or(root, "weather", "clear");
    spec.time_of_day = get_string_or(root, "time_of_day", "noon");
    spec.speed_limit_kmh = get_number_or(root, "speed_limit_kmh", 50.0);
    spec.duration_cap_s = get_number_or(root, "duration_cap_s", 20.0);
    if (const Value* v = toml::find(root, "trigger_point"); v != nullptr) {
        spec.trigger_point = get_point(*v, "trigger_point");
    }

    const Value& route = require(root, "scenario", "route", 1);
    for (const Value& wp : route.as_array()) {
        spec.route.push_back(parse_route_point(wp.as_table(), wp.line));
    }
    if (const Value* agents = toml::find(root, "agents"); agents != nullptr) {
        for (const Value& a : agents->as_array()) {
            spec.agents.push_back(parse_agent(a.as_table(), a.line));
        }
    }
    if (const Value* volumes = toml::find(root, "trigger_volumes"); volumes != nullptr) {
        for (const Value& v : volumes->as_array()) {
            spec.trigger_volumes.push_back(parse_volume(v.as_table(), v.line));
        }
    }
    if (const Value* ego = toml::find(root, "ego"); ego != nullptr) {
        spec.ego = parse_ego(ego->as_table());
    }

    if (const Value* cfg = toml::find(root, "config"); cfg != nullptr) {
        flatten_config(cfg->as_table(), "", out.config_overrides);
        std::sort(out.config_overrides.begin(), out.config_overrides.end());
        apply_config_overrides(out.config, cfg->as_table());
    }

    validate(spec);

    // default trigger point: the route end
    if (toml::find(root, "trigger_point") == nullptr) {
        spec.trigger_point = spec.route.back().position;
    }
    return out;
}

LoadedScenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario_string(buffer.str(), path);
}

std::string save_scenario(const LoadedScenario& scenario) {
    const ScenarioSpec& spec = scenario.spec;
    std::ostringstream out;
    out << "scenario_id = " << quote(spec.scenario_id) << "\n";
    out << "scenario_type = " << quote(to_string(spec.scenario_type)) << "\n";
    out << "weather = " << quote(spec.weather) << "\n";
    out << "time_of_day = " << quote(spec.time_of_day) << "\n";
    out << "speed_limit_kmh = " << fmt_number(spec.speed_limit_kmh) << "\n";
    out << "duration_cap_s = " << fmt_number(spec.duration_cap_s) << "\n";
    out << "trigger_point = [" << fmt_number(spec.trigger_point.x) << ", "
        << fmt_number(spec.trigger_point.y) << "]\n";

    out << "\n[ego]\n";
    out << "speed_kmh = " << fmt_number(spec.ego.speed_kmh) << "\n";
    out << "nav_command = " << quote(to_string(spec.ego.nav_command)) << "\n";
    out << "road_id = " << quote(spec.ego.road_id) << "\n";
    out << "half_length = " << fmt_number(spec.ego.half_length) << "\n";
    out << "half_width = " << fmt_number(spec.ego.half_width) << "\n";

    for (const RouteWaypoint& wp : spec.route) {
        out << "\n[[route]]\n";
        out << "x = " << fmt_number(wp.position.x) << "\n";
        out << "y = " << fmt_number(wp.position.y) << "\n";
        out << "semantic = " << quote(to_string(wp.semantic)) << "\n";
        out << "lane_id = " << quote(wp.lane_id) << "\n";
    }

    // a bare constant_action reads the agent's own accel/steer keys, so only
    // the prefixed (triggered) form re-emits them
    auto emit_constant = [&](const ConstantAction& a, const std::string& prefix) {
        if (!prefix.empty()) {
            out << prefix << "accel = " << fmt_number(a.accel) << "\n";
            out << prefix << "steer = " << fmt_number(a.steer) << "\n";
        }
        if (a.set_speed.has_value()) {
            out << prefix << "set_speed = " << fmt_number(*a.set_speed) << "\n";
        }
    };
    auto emit_follow = [&](const WaypointFollow& f, const std::string& prefix) {
        out << prefix << "target_speed = " << fmt_number(f.speed) << "\n";
        out << prefix << "path = [";
        for (std::size_t i = 0; i < f.path.size(); ++i) {
            if (i > 0) out << ", ";
            out << "[" << fmt_number(f.path[i].x) << ", " << fmt_number(f.path[i].y) << "]";
        }
        out << "]\n";
    };

    for (const AgentScript& script : spec.agents) {
        const AgentState& a = script.initial;
        out << "\n[[agents]]\n";
        out << "id = " << quote(a.id) << "\n";
        out << "kind = " << quote(to_string(a.kind)) << "\n";
        out << "x = " << fmt_number(a.pose.x) << "\n";
        out << "y = " << fmt_number(a.pose.y) << "\n";
        out << "yaw = " << fmt_number(a.pose.yaw) << "\n";
        out << "speed = " << fmt_number(a.speed) << "\n";
        out << "steer = " << fmt_number(a.steer) << "\n";
        out << "accel = " << fmt_number(a.accel) << "\n";
        out << "half_length = " << fmt_number(a.half_length) << "\n";
        out << "half_width = " << fmt_number(a.half_width) << "\n";
        out << "lane_id = " << quote(a.lane_id) << "\n";
        if (const auto* c = std::get_if<ConstantAction>(&script.behavior)) {
            out << "behavior = \"constant_action\"\n";
            emit_constant(*c, "");
        } else if (const auto* f = std::get_if<WaypointFollow>(&script.behavior)) {
            out << "behavior = \"waypoint_follow\"\n";
            emit_follow(*f, "");
        } else if (const auto* trig = std::get_if<Triggered>(&script.behavior)) {
            out << "behavior = \"triggered\"\n";
            out << "trigger_distance = " << fmt_number(trig->trigger_distance) << "\n";
            if (const auto* tc = std::get_if<ConstantAction>(&trig->then)) {
                out << "then_behavior = \"constant_action\"\n";
                emit_constant(*tc, "then_");
            } else if (const auto* tf = std::get_if<WaypointFollow>(&trig->then)) {
                out << "then_behavior = \"waypoint_follow\"\n";
                emit_follow(*tf, "then_");
            }
        }
    }

    for (const TriggerVolume& v : spec.trigger_volumes) {
        out << "\n[[trigger_volumes]]\n";
        out << "id = " << quote(v.id) << "\n";
        out << "kind = " << quote(to_string(v.kind)) << "\n";
        out << "x = " << fmt_number(v.box.center.x) << "\n";
        out << "y = " << fmt_number(v.box.center.y) << "\n";
        out << "yaw = " << fmt_number(v.box.center.yaw) << "\n";
        out << "half_length = " << fmt_number(v.box.half_length) << "\n";
        out << "half_width = " << fmt_number(v.box.half_width) << "\n";
        out << "light_state = " << quote(to_string(v.light_state)) << "\n";
        out << "affected_lanes = [";
        for (std::size_t i = 0; i < v.affected_lanes.size(); ++i) {
            if (i > 0) out << ", ";
            out << "[" << quote(v.affected_lanes[i].first) << ", "
                << quote(v.affected_lanes[i].second) << "]";
        }
        out << "]\n";
    }

    if (!scenario.config_overrides.empty()) {
        out << "\n[config]\n";
        for (const auto& [key, value] : scenario.config_overrides) {
            out << key << " = " << value << "\n";
        }
    }
    return out.str();
}

bool structurally_equal(const LoadedScenario& a, const LoadedScenario& b) {
    return save_scenario(a) == save_scenario(b);
}

}  // namespace cotsim
