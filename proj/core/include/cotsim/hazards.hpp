#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cotsim/config.hpp"
#include "cotsim/geometry.hpp"
#include "cotsim/kinematics.hpp"
#include "cotsim/world.hpp"

namespace cotsim {

/// Forward safety-checking box, anchored at the ego front bumper and sized
/// by the speed-dependent safety distance.
struct SafetyBox {
    OBB2D box;
    double length = 0.0;  // d_safety
};

/// Per-agent consecutive predicted-collision counts, threaded through frames
/// by the caller. A count above dangerous_consecutive escalates that agent's
/// criterion from box overlap to a 3 m proximity test.
using DangerousCounts = std::map<std::string, int>;

struct HazardReport {
    bool light_hazard = false;
    std::string light_id;
    bool stop_hazard = false;
    std::string stop_id;
    bool collision_hazard = false;
    std::optional<std::string> colliding_agent;
    std::optional<int> first_collision_frame;
    double colliding_agent_distance = 0.0;  // current gap to the colliding agent, m
    DangerousCounts dangerous;
};

/// Dynamic braking length in meters: 3 below 30 km/h, else (v/3.6)^2/10 - 4
/// with the 5 m/s^2 maximum deceleration. Throws on negative speed.
double safety_distance(double speed_kmh);

SafetyBox make_safety_box(const EgoState& ego);

/// Lanes the ego occupies now or will occupy along the remaining route.
std::set<std::pair<std::string, std::string>> planned_lanes(
    const EgoState& ego, const std::vector<RouteWaypoint>& dense, std::size_t from_index);

/// Red/yellow-light and unserved-stop-sign checks: a volume counts only when
/// its affected lanes intersect the planned lanes and its box overlaps the
/// safety box. `served_stops` lists stop signs the ego has already stopped for.
void check_light_stop_hazard(const EgoState& ego, const SafetyBox& safety_box,
                             const std::vector<TriggerVolume>& volumes,
                             const std::set<std::pair<std::string, std::string>>& lanes,
                             const std::set<std::string>& served_stops, const ExpertConfig& cfg,
                             HazardReport& report);

/// Inputs for the virtual ego rollout used by collision prediction: the ego
/// follows the dense route with fresh PID controllers at a held target speed.
struct VirtualRolloutContext {
    const std::vector<RouteWaypoint>* dense_route = nullptr;
    std::size_t route_cursor = 0;
    double target_speed_kmh = 0.0;  // the currently in-force final target
};

/// Ego rollout over `frames` steps under virtual PID control.
Rollout predict_ego_rollout(const EgoState& ego, int frames, const VirtualRolloutContext& ctx,
                            const ExpertConfig& cfg);

/// Horizon: 40 frames below 80 km/h, else 60.
int collision_horizon_frames(double ego_speed_kmh);

/// Frame-aligned collision prediction between the virtual ego rollout and
/// constant-action agent rollouts. Updates the consecutive counts.
void check_collision_hazard(const EgoState& ego, const std::vector<AgentState>& agents,
                            const VirtualRolloutContext& ctx, const DangerousCounts& prior,
                            const ExpertConfig& cfg, HazardReport& report);

}  // namespace cotsim
