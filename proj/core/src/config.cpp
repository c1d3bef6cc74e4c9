#include "cotsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cotsim {

namespace {

using toml::Table;
using toml::Value;

void set_number(double& field, const Value& v) { field = v.as_number(); }

void set_int(int& field, const Value& v) {
    const double n = v.as_number();
    if (n != std::floor(n)) throw toml::ParseError(v.line, "expected an integer");
    field = static_cast<int>(n);
}

void apply_gains(PIDGains& g, const Table& t) {
    for (const auto& [key, v] : t) {
        if (key == "kp") set_number(g.kp, v);
        else if (key == "ki") set_number(g.ki, v);
        else if (key == "kd") set_number(g.kd, v);
        else if (key == "buffer_frames") set_int(g.buffer_frames, v);
        else throw toml::ParseError(v.line, "config: unknown PID key '" + key + "'");
    }
}

void apply_ahead(AheadThresholds& a, const Table& t) {
    for (const auto& [key, v] : t) {
        if (key == "dist_brake") set_number(a.dist_brake, v);
        else if (key == "dist_slow_down") set_number(a.dist_slow_down, v);
        else if (key == "dist_follow") set_number(a.dist_follow, v);
        else if (key == "ttc_brake") set_number(a.ttc_brake, v);
        else if (key == "ttc_slow_down") set_number(a.ttc_slow_down, v);
        else if (key == "ttc_follow") set_number(a.ttc_follow, v);
        else if (key == "selector_near") set_number(a.selector_near, v);
        else if (key == "selector_far") set_number(a.selector_far, v);
        else if (key == "selector_rel_speed") set_number(a.selector_rel_speed, v);
        else if (key == "hysteresis_band") set_number(a.hysteresis_band, v);
        else throw toml::ParseError(v.line, "config: unknown ahead key '" + key + "'");
    }
    if (a.hysteresis_band < 0.0 || a.hysteresis_band > 0.5) {
        throw toml::ParseError(0, "config: hysteresis_band must be in [0, 0.5]");
    }
}

void apply_speeds(SpeedTable& s, const Table& t) {
    for (const auto& [key, v] : t) {
        if (key == "slow_approach") set_number(s.slow_approach, v);
        else if (key == "cautious_turn") set_number(s.cautious_turn, v);
        else if (key == "slow_down_factor") set_number(s.slow_down_factor, v);
        else if (key == "near_static_cutoff") set_number(s.near_static_cutoff, v);
        else throw toml::ParseError(v.line, "config: unknown speeds key '" + key + "'");
    }
}

void apply_penalties(InfractionPenalties& p, const Table& t) {
    for (const auto& [key, v] : t) {
        if (key == "collision_pedestrian") set_number(p.collision_pedestrian, v);
        else if (key == "collision_vehicle") set_number(p.collision_vehicle, v);
        else if (key == "red_light") set_number(p.red_light, v);
        else if (key == "stop_sign") set_number(p.stop_sign, v);
        else if (key == "route_deviation") set_number(p.route_deviation, v);
        else throw toml::ParseError(v.line, "config: unknown penalties key '" + key + "'");
    }
}

}  // namespace

void apply_config_overrides(ExpertConfig& cfg, const Table& table) {
    for (const auto& [key, v] : table) {
        if (key == "wheelbase") set_number(cfg.wheelbase, v);
        else if (key == "max_steer") set_number(cfg.max_steer, v);
        else if (key == "throttle_accel") set_number(cfg.throttle_accel, v);
        else if (key == "brake_decel") set_number(cfg.brake_decel, v);
        else if (key == "yellow_is_red") cfg.yellow_is_red = v.as_bool();
        else if (key == "dangerous_consecutive") set_int(cfg.dangerous_consecutive, v);
        else if (key == "dangerous_distance") set_number(cfg.dangerous_distance, v);
        else if (key == "route_deviation_m") set_number(cfg.route_deviation_m, v);
        else if (key == "collision_dedup_frames") set_int(cfg.collision_dedup_frames, v);
        else if (key == "blocked_timeout_s") set_number(cfg.blocked_timeout_s, v);
        else if (key == "blocked_progress_m") set_number(cfg.blocked_progress_m, v);
        else if (key == "ahead") apply_ahead(cfg.ahead, v.as_table());
        else if (key == "speeds") apply_speeds(cfg.speeds, v.as_table());
        else if (key == "longitudinal") apply_gains(cfg.longitudinal, v.as_table());
        else if (key == "lateral") apply_gains(cfg.lateral, v.as_table());
        else if (key == "penalties") apply_penalties(cfg.penalties, v.as_table());
        else throw toml::ParseError(v.line, "config: unknown key '" + key + "'");
    }
}

void load_config_file(ExpertConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    apply_config_overrides(cfg, toml::parse(buffer.str()));
}

}  // namespace cotsim
