#include "cotsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cotsim/control.hpp"
#include "cotsim/kinematics.hpp"

namespace cotsim {

const char* to_string(InfractionKind k) {
    switch (k) {
        case InfractionKind::collision_vehicle: return "collision_vehicle";
        case InfractionKind::collision_pedestrian: return "collision_pedestrian";
        case InfractionKind::red_light: return "red_light";
        case InfractionKind::stop_sign: return "stop_sign";
        case InfractionKind::route_deviation: return "route_deviation";
    }
    return "?";
}

InfractionKind infraction_kind_from_string(const std::string& s) {
    if (s == "collision_vehicle") return InfractionKind::collision_vehicle;
    if (s == "collision_pedestrian") return InfractionKind::collision_pedestrian;
    if (s == "red_light") return InfractionKind::red_light;
    if (s == "stop_sign") return InfractionKind::stop_sign;
    if (s == "route_deviation") return InfractionKind::route_deviation;
    throw std::invalid_argument("unknown infraction kind '" + s + "'");
}

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::duration_cap: return "duration_cap";
        case TerminationReason::route_complete: return "route_complete";
        case TerminationReason::blocked: return "blocked";
    }
    return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97f4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Pure-pursuit steering of a scripted agent toward its polyline.
void waypoint_follow_step(AgentState& agent, const WaypointFollow& follow, ScriptState& state,
                          const ExpertConfig& cfg) {
    const auto& path = follow.path;
    // advance the cursor past points we are already beyond
    while (state.path_cursor + 1 < path.size() &&
           (path[state.path_cursor] - agent.pose.position()).norm() < 2.0) {
        ++state.path_cursor;
    }
    const double lookahead = std::max(3.0, agent.speed);
    std::size_t target = state.path_cursor;
    while (target + 1 < path.size() &&
           (path[target] - agent.pose.position()).norm() < lookahead) {
        ++target;
    }
    const Vec2 local = agent.pose.to_local(path[target]);
    if (local.norm_sq() > 1e-12) {
        const double alpha = std::atan2(local.y, local.x);
        const double ld = std::max(1.0, local.norm());
        agent.steer = std::clamp(std::atan2(2.0 * cfg.wheelbase * std::sin(alpha), ld),
                                 -cfg.max_steer, cfg.max_steer);
    } else {
        agent.steer = 0.0;
    }
    agent.accel = std::clamp(0.8 * (follow.speed - agent.speed), -cfg.brake_decel, cfg.throttle_accel);
}

void apply_behavior(AgentState& agent, const std::variant<ConstantAction, WaypointFollow>& behavior,
                    ScriptState& state, const ExpertConfig& cfg) {
    if (const auto* action = std::get_if<ConstantAction>(&behavior)) {
        if (!state.action_applied) {
            if (action->set_speed.has_value()) {
                agent.speed = std::max(0.0, *action->set_speed);
            }
            agent.accel = action->accel;
            agent.steer = agent.kind == AgentKind::pedestrian ? 0.0 : action->steer;
            state.action_applied = true;
        }
    } else if (const auto* follow = std::get_if<WaypointFollow>(&behavior)) {
        waypoint_follow_step(agent, *follow, state, cfg);
    }
}

bool is_turn_command(NavCommand c) {
    return c == NavCommand::turn_left || c == NavCommand::turn_right;
}

std::string plan_route_type(const std::vector<RouteWaypoint>& dense, std::size_t ego_index,
                            double lookahead) {
    int turn_n = 0, lane_n = 0, other_n = 0;
    const double s0 = dense[std::min(ego_index, dense.size() - 1)].arc_length;
    for (int k = 0; k < kPlannedWaypointCount; ++k) {
        const double s = s0 + lookahead + k;
        const std::size_t idx =
            std::min(dense.size() - 1, static_cast<std::size_t>(std::max(0.0, std::floor(s))));
        switch (dense[idx].semantic) {
            case WaypointSemantic::turn: ++turn_n; break;
            case WaypointSemantic::lane_change: ++lane_n; break;
            default: ++other_n; break;
        }
    }
    if (turn_n >= lane_n && turn_n >= other_n) return "turn";
    if (lane_n >= other_n) return "lane_change";
    return "straight";
}

}  // namespace

void step_scripts(std::vector<AgentState>& agents, const std::vector<AgentScript>& scripts,
                  std::vector<ScriptState>& states, const EgoState& ego, const ExpertConfig& cfg) {
    if (agents.size() != scripts.size() || states.size() != scripts.size()) {
        throw std::invalid_argument("step_scripts: one script per agent required");
    }
    const BicycleParams params{cfg.wheelbase, cfg.max_steer, cfg.dt};
    for (std::size_t i = 0; i < agents.size(); ++i) {
        AgentState& agent = agents[i];
        ScriptState& state = states[i];
        const Behavior& behavior = scripts[i].behavior;

        if (const auto* trig = std::get_if<Triggered>(&behavior)) {
            if (!state.activated &&
                (ego.pose.position() - agent.pose.position()).norm() <= trig->trigger_distance) {
                state.activated = true;
            }
            if (state.activated) {
                apply_behavior(agent, trig->then, state, cfg);
            } else {
                // dormant: hold the current action
            }
        } else if (const auto* action = std::get_if<ConstantAction>(&behavior)) {
            apply_behavior(agent, std::variant<ConstantAction, WaypointFollow>(*action), state, cfg);
        } else if (const auto* follow = std::get_if<WaypointFollow>(&behavior)) {
            waypoint_follow_step(agent, *follow, state, cfg);
        }

        agent = bicycle_step(agent, params);
    }
}

void check_infractions(const EgoState& ego, const std::vector<AgentState>& agents,
                       const std::vector<TriggerVolume>& volumes,
                       const std::vector<RouteWaypoint>& dense, std::size_t ego_index, int frame,
                       const ExpertConfig& cfg, InfractionTrackers& trackers, InfractionLog& log) {
    const OBB2D ego_box = ego.box();

    // actual contact, one event per contact episode within the dedup window
    for (const AgentState& agent : agents) {
        auto& cs = trackers.collisions[agent.id];
        const bool contact = obb_overlap(ego_box, agent.box());
        if (contact && !cs.contact &&
            (cs.last_event_frame < 0 || frame - cs.last_event_frame >= cfg.collision_dedup_frames)) {
            log.events.push_back({frame,
                                  agent.kind == AgentKind::pedestrian
                                      ? InfractionKind::collision_pedestrian
                                      : InfractionKind::collision_vehicle,
                                  agent.id});
            cs.last_event_frame = frame;
        }
        cs.contact = contact;
    }

    // stop-line crossings: entering a red-light volume and leaving it on the
    // far side while it is still red; passing a stop sign without stopping
    for (const TriggerVolume& v : volumes) {
        auto& vs = trackers.volumes[v.id];
        if (vs.crossed) {
            continue;
        }
        const bool inside = obb_overlap(ego_box, v.box);
        if (inside) {
            if (!vs.inside) {
                vs.min_speed_inside = ego.speed_mps;
                vs.entered_on_red =
                    v.kind == TriggerKind::traffic_light && v.light_state == LightState::red;
            }
            vs.min_speed_inside = std::min(vs.min_speed_inside, ego.speed_mps);
        } else if (vs.inside) {
            // exited: only a crossing when the ego moved past the volume
            const Vec2 local = v.box.center.to_local(ego.pose.position());
            const bool past = local.x > 0.0;
            if (past) {
                vs.crossed = true;
                if (v.kind == TriggerKind::traffic_light && vs.entered_on_red &&
                    v.light_state == LightState::red) {
                    log.events.push_back({frame, InfractionKind::red_light, ""});
                } else if (v.kind == TriggerKind::stop_sign && vs.min_speed_inside > 0.1) {
                    log.events.push_back({frame, InfractionKind::stop_sign, ""});
                }
            }
        }
        vs.inside = inside;
    }

    // route deviation, re-armed when back within the corridor
    const double lateral = (dense[ego_index].position - ego.pose.position()).norm();
    if (lateral > cfg.route_deviation_m) {
        if (trackers.deviation_armed) {
            log.events.push_back({frame, InfractionKind::route_deviation, ""});
            trackers.deviation_armed = false;
        }
    } else {
        trackers.deviation_armed = true;
    }
}

RunResult run_scenario(const LoadedScenario& scenario, std::uint64_t seed) {
    const ScenarioSpec& spec = scenario.spec;
    const ExpertConfig& cfg = scenario.config;

    const std::vector<RouteWaypoint> dense = densify_route(spec.route);
    const double total_arc = dense.back().arc_length;

    RunResult result;
    result.scenario_id = spec.scenario_id;
    result.total_arc = total_arc;

    // ego starts at the route head, facing along it
    EgoState ego;
    ego.pose.x = dense[0].position.x;
    ego.pose.y = dense[0].position.y;
    const Vec2 dir = dense[1].position - dense[0].position;
    ego.pose.yaw = normalize_yaw(std::atan2(dir.y, dir.x));
    ego.speed_mps = kmh_to_mps(spec.ego.speed_kmh);
    ego.half_length = spec.ego.half_length;
    ego.half_width = spec.ego.half_width;
    ego.road_id = spec.ego.road_id;
    ego.lane_id = dense[0].lane_id;
    ego.nav_command = spec.ego.nav_command;

    std::vector<AgentState> agents;
    agents.reserve(spec.agents.size());
    for (const AgentScript& s : spec.agents) {
        agents.push_back(s.initial);
    }
    std::vector<ScriptState> script_states(spec.agents.size());

    PIDController lon(cfg.longitudinal, cfg.dt);
    PIDController lat(cfg.lateral, cfg.dt);
    const BicycleParams params{cfg.wheelbase, cfg.max_steer, cfg.dt};

    DangerousCounts dangerous;
    AheadState ahead_state;
    std::set<std::string> served_stops;
    InfractionTrackers trackers;

    std::size_t cursor = 0;

    const int cap_frames = static_cast<int>(std::lround(spec.duration_cap_s * kControlHz));
    const int blocked_frames = static_cast<int>(std::lround(cfg.blocked_timeout_s * kControlHz));
    double progress_ref_arc = 0.0;
    int progress_ref_frame = 0;

    SimClock clock;
    for (;; clock.tick()) {
        if (clock.frame >= cap_frames) {
            result.terminated_by = TerminationReason::duration_cap;
            break;
        }
        cursor = project_onto_route(ego.pose.position(), dense, cursor);
        const double cursor_arc = dense[cursor].arc_length;
        if (total_arc - cursor_arc <= 2.0) {
            result.terminated_by = TerminationReason::route_complete;
            break;
        }
        if (cursor_arc - progress_ref_arc >= cfg.blocked_progress_m) {
            progress_ref_arc = cursor_arc;
            progress_ref_frame = clock.frame;
        } else if (clock.frame - progress_ref_frame >= blocked_frames) {
            result.terminated_by = TerminationReason::blocked;
            break;
        }

        // 1. scripted agents move
        step_scripts(agents, spec.agents, script_states, ego, cfg);

        // 2. light and stop-sign hazards
        ego.lane_id = dense[cursor].lane_id;
        const SafetyBox sbox = make_safety_box(ego);
        const auto lanes = planned_lanes(ego, dense, cursor);
        HazardReport report;
        check_light_stop_hazard(ego, sbox, spec.trigger_volumes, lanes, served_stops, cfg, report);

        // 3. ahead relation
        const AheadObservation obs = observe_ahead(ego, agents, dense, cursor);
        const AheadDecision adec = ahead_decision(obs, ahead_state, spec.speed_limit_kmh, cfg);

        // 4. collision hazard against the pre-collision intent: the virtual
        // ego drives at the target this frame would produce absent a
        // predicted collision, so the verdict is not fed back into itself
        CoTAspects aspects;
        aspects.light_hazard = report.light_hazard;
        aspects.light_id = report.light_id;
        aspects.stop_hazard = report.stop_hazard;
        aspects.stop_id = report.stop_id;
        aspects.is_junction = dense[cursor].semantic == WaypointSemantic::junction ||
                              dense[cursor].semantic == WaypointSemantic::turn;
        aspects.nav_is_turn = is_turn_command(ego.nav_command);
        aspects.ahead = obs;
        aspects.ahead_decision = adec;
        aspects.speed_limit_kmh = spec.speed_limit_kmh;
        const double intent_target = resolve(aspects, cfg.speeds).target_speed_kmh;

        VirtualRolloutContext ctx{&dense, cursor, intent_target};
        check_collision_hazard(ego, agents, ctx, dangerous, cfg, report);
        dangerous = report.dangerous;

        // a stop sign is served once the ego holds a full stop for it
        if (report.stop_hazard && ego.speed_mps <= 0.1) {
            served_stops.insert(report.stop_id);
        }

        // 5. chain-of-thought resolution with the collision verdict
        aspects.collision_hazard = report.collision_hazard;
        aspects.collision_agent = report.colliding_agent;
        aspects.collision_agent_distance = report.colliding_agent_distance;
        const CoTRecord record =
            resolve(aspects, cfg.speeds, splitmix64(seed ^ static_cast<std::uint64_t>(clock.frame)));

        // 6. planned waypoints
        const PlannedPath plan = plan_waypoints(ego, dense, cursor);

        // 7. PID controls
        double steer_cmd = 0.0;
        if (plan.waypoints[0].norm_sq() > 1e-18) {
            steer_cmd = lateral_control(plan.waypoints[0], lat);
        }
        const auto [throttle, brake] =
            longitudinal_control(ego.speed_kmh(), record.target_speed_kmh, lon);

        // snapshot before stepping: the record holds what the policy saw
        const EgoState ego_snapshot = ego;

        // 8. bicycle-step the ego
        AgentState proxy;
        proxy.kind = AgentKind::vehicle;
        proxy.pose = ego.pose;
        proxy.speed = ego.speed_mps;
        proxy.steer = steer_cmd * cfg.max_steer;
        proxy.accel = throttle * cfg.throttle_accel - brake * cfg.brake_decel;
        proxy.half_length = ego.half_length;
        proxy.half_width = ego.half_width;
        const AgentState stepped = bicycle_step(proxy, params);
        ego.pose = stepped.pose;
        ego.speed_mps = stepped.speed;

        // 9. infractions on the post-step world
        check_infractions(ego, agents, spec.trigger_volumes, dense, cursor, clock.frame, cfg,
                          trackers, result.infractions);

        // 10. 2 Hz log
        if (clock.log_frame()) {
            FrameRecord fr;
            fr.scenario_id = spec.scenario_id;
            fr.frame = clock.frame;
            fr.sim_time_s = clock.sim_time();
            fr.ego = ego_snapshot;
            fr.agents = agents;
            fr.cot = record;
            fr.plan = plan;
            fr.target_point = ego_snapshot.pose.to_local(spec.trigger_point);
            fr.nav_command = ego_snapshot.nav_command;
            fr.route_type = plan_route_type(dense, cursor, plan.first_point_distance);
            result.frames.push_back(std::move(fr));
        }
    }

    result.sim_frames = clock.frame;
    result.completed_arc = result.terminated_by == TerminationReason::route_complete
                               ? total_arc
                               : dense[cursor].arc_length;
    return result;
}

}  // namespace cotsim
