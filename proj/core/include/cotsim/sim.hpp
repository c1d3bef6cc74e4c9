#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cotsim/cot.hpp"
#include "cotsim/hazards.hpp"
#include "cotsim/scenario_io.hpp"
#include "cotsim/waypoints.hpp"
#include "cotsim/world.hpp"

namespace cotsim {

inline constexpr int kControlHz = 20;
inline constexpr int kLogEveryNthFrame = 10;  // 2 Hz records

/// Lockstep clock: simulation and control both run at 20 FPS.
struct SimClock {
    int frame = 0;

    double sim_time() const { return frame * 0.05; }
    bool log_frame() const { return frame % kLogEveryNthFrame == 0; }
    void tick() { ++frame; }
};

enum class InfractionKind { collision_vehicle, collision_pedestrian, red_light, stop_sign, route_deviation };

const char* to_string(InfractionKind k);
InfractionKind infraction_kind_from_string(const std::string& s);

struct InfractionEvent {
    int frame = 0;
    InfractionKind kind = InfractionKind::collision_vehicle;
    std::string agent_id;  // empty for non-collision events
};

struct InfractionLog {
    std::vector<InfractionEvent> events;  // frames non-decreasing
};

enum class TerminationReason { duration_cap, route_complete, blocked };

const char* to_string(TerminationReason r);

/// One 2 Hz logged sample: the world as the policy saw it plus what it decided.
struct FrameRecord {
    std::string scenario_id;
    int frame = 0;
    double sim_time_s = 0.0;
    EgoState ego;
    std::vector<AgentState> agents;
    CoTRecord cot;
    PlannedPath plan;
    Vec2 target_point;  // ego-local direction indicator
    NavCommand nav_command = NavCommand::follow;
    std::string route_type;  // straight | turn | lane_change
};

struct RunResult {
    std::string scenario_id;
    std::vector<FrameRecord> frames;
    InfractionLog infractions;
    double completed_arc = 0.0;
    double total_arc = 0.0;
    TerminationReason terminated_by = TerminationReason::duration_cap;
    int sim_frames = 0;  // count of simulated control frames
};

/// Deterministic closed-loop run: same (scenario, seed) yields bit-identical
/// results. The seed only picks reason templates; physics is seed-free.
RunResult run_scenario(const LoadedScenario& scenario, std::uint64_t seed);

/// Per-agent script bookkeeping threaded through frames by the simulator.
struct ScriptState {
    bool activated = false;       // triggered behaviors
    bool action_applied = false;  // set_speed consumed
    std::size_t path_cursor = 0;  // waypoint followers
};

/// Advances every scripted agent one control frame. Triggered behaviors
/// activate on the exact frame the ego is within trigger_distance.
void step_scripts(std::vector<AgentState>& agents, const std::vector<AgentScript>& scripts,
                  std::vector<ScriptState>& states, const EgoState& ego, const ExpertConfig& cfg);

/// Live infraction trackers (dedup windows, stop-line crossings).
struct InfractionTrackers {
    struct VolumeState {
        bool entered_on_red = false;
        bool inside = false;
        double min_speed_inside = 0.0;
        bool crossed = false;
    };
    std::map<std::string, VolumeState> volumes;
    struct CollisionState {
        bool contact = false;
        int last_event_frame = -1;
    };
    std::map<std::string, CollisionState> collisions;
    bool deviation_armed = true;
};

/// Appends collision / red-light / stop-sign / route-deviation events for the
/// current frame. Collision events deduplicate per agent per 2 s window.
void check_infractions(const EgoState& ego, const std::vector<AgentState>& agents,
                       const std::vector<TriggerVolume>& volumes,
                       const std::vector<RouteWaypoint>& dense, std::size_t ego_index, int frame,
                       const ExpertConfig& cfg, InfractionTrackers& trackers, InfractionLog& log);

}  // namespace cotsim
