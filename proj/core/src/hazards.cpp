#include "cotsim/hazards.hpp"

#include <algorithm>
#include <stdexcept>

#include "cotsim/control.hpp"
#include "cotsim/waypoints.hpp"

namespace cotsim {

double safety_distance(double speed_kmh) {
    if (speed_kmh < 0.0) {
        throw std::invalid_argument("safety_distance: negative speed");
    }
    if (speed_kmh < 30.0) {
        return 3.0;
    }
    const double v = speed_kmh / 3.6;
    return v * v / (2.0 * 5.0) - 4.0;
}

SafetyBox make_safety_box(const EgoState& ego) {
    SafetyBox sb;
    sb.length = safety_distance(ego.speed_kmh());
    const Vec2 fwd = ego.pose.heading();
    const Vec2 center =
        ego.pose.position() + fwd * (ego.half_length + sb.length / 2.0);
    sb.box.center = {center.x, center.y, ego.pose.yaw};
    sb.box.half_length = sb.length / 2.0;
    sb.box.half_width = ego.half_width;
    return sb;
}

std::set<std::pair<std::string, std::string>> planned_lanes(
    const EgoState& ego, const std::vector<RouteWaypoint>& dense, std::size_t from_index) {
    std::set<std::pair<std::string, std::string>> lanes;
    lanes.emplace(ego.road_id, ego.lane_id);
    for (std::size_t i = from_index; i < dense.size(); ++i) {
        lanes.emplace(ego.road_id, dense[i].lane_id);
    }
    return lanes;
}

void check_light_stop_hazard(const EgoState& ego, const SafetyBox& safety_box,
                             const std::vector<TriggerVolume>& volumes,
                             const std::set<std::pair<std::string, std::string>>& lanes,
                             const std::set<std::string>& served_stops, const ExpertConfig& cfg,
                             HazardReport& report) {
    (void)ego;
    for (const TriggerVolume& v : volumes) {
        const bool affects = std::any_of(v.affected_lanes.begin(), v.affected_lanes.end(),
                                         [&](const auto& lane) { return lanes.count(lane) > 0; });
        if (!affects) {
            continue;
        }
        if (v.kind == TriggerKind::traffic_light) {
            const bool halting = v.light_state == LightState::red ||
                                 (cfg.yellow_is_red && v.light_state == LightState::yellow);
            if (halting && !report.light_hazard && obb_overlap(v.box, safety_box.box)) {
                report.light_hazard = true;
                report.light_id = v.id;
            }
        } else {
            if (served_stops.count(v.id) == 0 && !report.stop_hazard &&
                obb_overlap(v.box, safety_box.box)) {
                report.stop_hazard = true;
                report.stop_id = v.id;
            }
        }
    }
}

int collision_horizon_frames(double ego_speed_kmh) {
    return ego_speed_kmh < 80.0 ? 40 : 60;
}

Rollout predict_ego_rollout(const EgoState& ego, int frames, const VirtualRolloutContext& ctx,
                            const ExpertConfig& cfg) {
    if (frames <= 0) {
        throw std::invalid_argument("predict_ego_rollout: frames must be positive");
    }
    if (ctx.dense_route == nullptr || ctx.dense_route->size() < 2) {
        throw std::invalid_argument("predict_ego_rollout: missing dense route");
    }

    Rollout out;
    out.poses.reserve(static_cast<std::size_t>(frames));
    out.speeds.reserve(static_cast<std::size_t>(frames));
    out.boxes.reserve(static_cast<std::size_t>(frames));

    // fresh virtual controllers, retargeted to the planned path every frame
    PIDController lon(cfg.longitudinal, cfg.dt);
    PIDController lat(cfg.lateral, cfg.dt);
    const BicycleParams params{cfg.wheelbase, cfg.max_steer, cfg.dt};

    EgoState virtual_ego = ego;
    std::size_t cursor = ctx.route_cursor;
    for (int i = 0; i < frames; ++i) {
        const PlannedPath plan = plan_waypoints(virtual_ego, *ctx.dense_route, cursor);
        cursor = plan.projection_index;

        double steer_cmd = 0.0;
        const Vec2& first = plan.waypoints[0];
        if (first.norm_sq() > 1e-18) {
            steer_cmd = lateral_control(first, lat);
        }
        const auto [throttle, brake] =
            longitudinal_control(virtual_ego.speed_kmh(), ctx.target_speed_kmh, lon);

        AgentState proxy;
        proxy.kind = AgentKind::vehicle;
        proxy.pose = virtual_ego.pose;
        proxy.speed = virtual_ego.speed_mps;
        proxy.steer = steer_cmd * cfg.max_steer;
        proxy.accel = throttle * cfg.throttle_accel - brake * cfg.brake_decel;
        proxy.half_length = virtual_ego.half_length;
        proxy.half_width = virtual_ego.half_width;
        const AgentState next = bicycle_step(proxy, params);

        virtual_ego.pose = next.pose;
        virtual_ego.speed_mps = next.speed;
        out.poses.push_back(next.pose);
        out.speeds.push_back(next.speed);
        out.boxes.push_back(next.box());
    }
    return out;
}

void check_collision_hazard(const EgoState& ego, const std::vector<AgentState>& agents,
                            const VirtualRolloutContext& ctx, const DangerousCounts& prior,
                            const ExpertConfig& cfg, HazardReport& report) {
    report.dangerous.clear();
    if (agents.empty()) {
        return;
    }

    const int frames = collision_horizon_frames(ego.speed_kmh());
    const Rollout ego_roll = predict_ego_rollout(ego, frames, ctx, cfg);
    const BicycleParams params{cfg.wheelbase, cfg.max_steer, cfg.dt};

    int best_frame = -1;
    std::string best_agent;
    double best_distance = 0.0;

    for (const AgentState& agent : agents) {
        const Rollout agent_roll = predict_agent_rollout(agent, frames, params);

        int first_overlap = -1;
        for (int t = 0; t < frames; ++t) {
            const auto ti = static_cast<std::size_t>(t);
            if (obb_overlap(ego_roll.boxes[ti], agent_roll.boxes[ti])) {
                first_overlap = t;
                break;
            }
        }

        int prior_count = 0;
        if (auto it = prior.find(agent.id); it != prior.end()) {
            prior_count = it->second;
        }

        int first_trigger = first_overlap;
        if (prior_count > cfg.dangerous_consecutive) {
            // escalated criterion: proximity instead of overlap
            for (int t = 0; t < frames; ++t) {
                const auto ti = static_cast<std::size_t>(t);
                if (obb_min_distance(ego_roll.boxes[ti], agent_roll.boxes[ti]) <
                    cfg.dangerous_distance) {
                    if (first_trigger < 0 || t < first_trigger) {
                        first_trigger = t;
                    }
                    break;
                }
            }
        }

        report.dangerous[agent.id] = first_overlap >= 0 ? prior_count + 1 : 0;

        if (first_trigger >= 0 &&
            (best_frame < 0 || first_trigger < best_frame ||
             (first_trigger == best_frame && agent.id < best_agent))) {
            best_frame = first_trigger;
            best_agent = agent.id;
            best_distance = obb_min_distance(ego.box(), agent.box());
        }
    }

    if (best_frame >= 0) {
        report.collision_hazard = true;
        report.colliding_agent = best_agent;
        report.first_collision_frame = best_frame;
        report.colliding_agent_distance = best_distance;
    }
}

}  // namespace cotsim
