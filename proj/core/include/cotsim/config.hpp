#pragma once

#include <string>

#include "cotsim/toml_lite.hpp"

namespace cotsim {

struct PIDGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    int buffer_frames = 1;
};

/// Distance / time-to-collision cut points for the ahead-vehicle relation.
/// The intervals are [0, brake), [brake, slow_down), [slow_down, follow),
/// [follow, inf) mapping to Brake, SlowDown, FollowAhead, AimSpeedLimit.
struct AheadThresholds {
    double dist_brake = 4.0;
    double dist_slow_down = 8.0;
    double dist_follow = 14.0;
    double ttc_brake = 2.0;
    double ttc_slow_down = 4.0;
    double ttc_follow = 7.0;

    // distance selector: gap < selector_near, or gap < selector_far with
    // |relative speed| < selector_rel_speed
    double selector_near = 5.0;
    double selector_far = 10.0;
    double selector_rel_speed = 3.0;

    double hysteresis_band = 0.2;  // fraction of the active interval width, [0, 0.5]
};

/// Per-class target speeds (km/h unless noted).
struct SpeedTable {
    double slow_approach = 10.0;
    double cautious_turn = 30.0;
    double slow_down_factor = 0.75;  // fraction of the ahead vehicle speed
    double near_static_cutoff = 5.0;
};

/// Multiplicative infraction penalties for closed-loop scoring.
struct InfractionPenalties {
    double collision_pedestrian = 0.50;
    double collision_vehicle = 0.60;
    double red_light = 0.70;
    double stop_sign = 0.80;
    double route_deviation = 0.70;
};

struct ExpertConfig {
    // vehicle model
    double wheelbase = 2.9;        // m
    double max_steer = 1.22;       // rad, also the tan() clamp bound
    double dt = 0.05;              // s, 20 FPS lockstep
    double throttle_accel = 3.0;   // m/s^2 at full throttle
    double brake_decel = 5.0;      // m/s^2 at full brake (|a_brake_max|)

    // hazards
    bool yellow_is_red = true;
    int dangerous_consecutive = 5;   // "more than five": count > 5 escalates
    double dangerous_distance = 3.0; // m

    AheadThresholds ahead;
    SpeedTable speeds;

    PIDGains longitudinal{0.3, 0.05, 0.0, 20};
    PIDGains lateral{0.8, 0.3, 0.0, 10};

    // infractions / termination
    double route_deviation_m = 5.0;
    int collision_dedup_frames = 40;   // 2 s at 20 FPS
    double blocked_timeout_s = 30.0;
    double blocked_progress_m = 0.1;

    InfractionPenalties penalties;
};

/// Applies a `[config]`-style override table (scenario file or standalone
/// config file). Unknown keys are an error so typos never pass silently.
void apply_config_overrides(ExpertConfig& cfg, const toml::Table& table);

/// Loads overrides from a standalone TOML file holding the same keys.
void load_config_file(ExpertConfig& cfg, const std::string& path);

}  // namespace cotsim
