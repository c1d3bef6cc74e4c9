#include <doctest.h>

#include <cmath>

#include "cotsim/frame_log.hpp"
#include "cotsim/sim.hpp"

using namespace cotsim;

namespace {

const char* kStraight = R"(
scenario_id = "straight"
scenario_type = "ahead_vehicle"
speed_limit_kmh = 50

[[route]]
x = 0
y = 0

[[route]]
x = 400
y = 0
)";

const char* kPedestrian = R"(
scenario_id = "ped_cross"
scenario_type = "crossing_pedestrian"
speed_limit_kmh = 40
duration_cap_s = 20

[[route]]
x = 0
y = 0

[[route]]
x = 250
y = 0

[[agents]]
id = "walker"
kind = "pedestrian"
x = 60
y = -1.5
yaw = 1.5707963267948966
speed = 0
behavior = "triggered"
trigger_distance = 20
then_behavior = "constant_action"
then_set_speed = 0.4
)";

const char* kCutIn = R"(
scenario_id = "cut_in"
scenario_type = "lane_merge_cutin"
speed_limit_kmh = 50
duration_cap_s = 20

[ego]
speed_kmh = 50

[[route]]
x = 0
y = 0

[[route]]
x = 300
y = 0

[[agents]]
id = "merger"
kind = "vehicle"
x = 30
y = 3.5
speed = 4
behavior = "triggered"
trigger_distance = 28
then_behavior = "waypoint_follow"
then_target_speed = 8
then_path = [[30, 3.5], [55, 1.5], [75, 0], [300, 0]]
)";

LoadedScenario load(const char* text) { return load_scenario_string(text); }

}  // namespace

TEST_CASE("20 s cap gives exactly 400 sim frames and 40 records") {
    // a red light pins the ego short of the route end so the cap terminates
    std::string text = std::string(kStraight) +
                       "[[trigger_volumes]]\nid = \"tl\"\nkind = \"traffic_light\"\nx = 120\ny = 0\n"
                       "half_length = 5\nhalf_width = 3\nlight_state = \"red\"\n"
                       "affected_lanes = [[\"r0\", \"l0\"]]\n";
    const RunResult result = run_scenario(load_scenario_string(text), 1);
    CHECK(result.terminated_by == TerminationReason::duration_cap);
    CHECK(result.sim_frames == 400);
    CHECK(result.frames.size() == 40);
    // frame-count law: floor(last_frame/10) + 1 with frame 0 logged
    CHECK(result.frames.size() ==
          static_cast<std::size_t>((result.sim_frames - 1) / kLogEveryNthFrame) + 1);
    CHECK(result.frames.front().frame == 0);
    CHECK(result.frames.back().frame == 390);
}

TEST_CASE("same spec and seed give byte-identical logs") {
    const LoadedScenario scenario = load(kPedestrian);
    const RunResult a = run_scenario(scenario, 7);
    const RunResult b = run_scenario(scenario, 7);
    CHECK(run_to_jsonl(a) == run_to_jsonl(b));
}

TEST_CASE("different seeds change only the reason text") {
    const LoadedScenario scenario = load(kStraight);
    const RunResult a = run_scenario(scenario, 1);
    const RunResult b = run_scenario(scenario, 2);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        CHECK(a.frames[i].ego == b.frames[i].ego);
        CHECK(a.frames[i].cot.final == b.frames[i].cot.final);
        CHECK(a.frames[i].cot.target_speed_kmh == b.frames[i].cot.target_speed_kmh);
    }
}

TEST_CASE("empty straight run completes the route without infractions") {
    LoadedScenario scenario = load(kStraight);
    scenario.spec.duration_cap_s = 60.0;
    const RunResult result = run_scenario(scenario, 1);
    CHECK(result.terminated_by == TerminationReason::route_complete);
    CHECK(result.infractions.events.empty());
    CHECK(result.completed_arc == result.total_arc);
}

TEST_CASE("ego accelerates toward the speed limit on a clear road") {
    const RunResult result = run_scenario(load(kStraight), 1);
    bool reached = false;
    for (const FrameRecord& fr : result.frames) {
        CHECK(fr.cot.final == SpeedDecisionClass::SpeedLimit);
        if (std::abs(fr.ego.speed_kmh() - 50.0) < 2.5) {
            reached = true;
        }
    }
    CHECK(reached);
}

TEST_CASE("crossing pedestrian: full stop, zero collisions, collision-brake frames") {
    const RunResult result = run_scenario(load(kPedestrian), 3);
    CHECK(result.infractions.events.empty());

    bool braked_for_collision = false;
    bool full_stop = false;
    for (const FrameRecord& fr : result.frames) {
        if (fr.cot.final == SpeedDecisionClass::Brake && fr.cot.aspects.collision_hazard) {
            CHECK(fr.cot.reason.find("collision") != std::string::npos);
            braked_for_collision = true;
        }
        if (braked_for_collision && fr.ego.speed_mps <= 0.3) {
            full_stop = true;
        }
    }
    CHECK(braked_for_collision);
    CHECK(full_stop);
}

TEST_CASE("cut-in vehicle forces a reaction without contact") {
    const RunResult result = run_scenario(load(kCutIn), 5);
    CHECK(result.infractions.events.empty());
    bool reacted = false;
    for (const FrameRecord& fr : result.frames) {
        if (fr.cot.aspects.collision_hazard ||
            (fr.cot.aspects.ahead.exists && fr.cot.final != SpeedDecisionClass::SpeedLimit)) {
            reacted = true;
        }
    }
    CHECK(reacted);
}

TEST_CASE("triggered behavior activates on the exact frame") {
    LoadedScenario scenario = load(kPedestrian);
    const ExpertConfig& cfg = scenario.config;

    std::vector<AgentState> agents = {scenario.spec.agents[0].initial};
    std::vector<ScriptState> states(1);
    EgoState ego;
    ego.pose = {60.0 - 20.0 - 0.5, -1.5, 0.0};  // just outside the trigger radius
    ego.speed_mps = 10.0;

    // outside: the walker must not move
    step_scripts(agents, scenario.spec.agents, states, ego, cfg);
    CHECK(agents[0].speed == 0.0);
    CHECK(agents[0].pose.y == -1.5);
    CHECK_FALSE(states[0].activated);

    // inside: the swap happens this exact frame
    ego.pose.x += 1.0;  // distance 29.5 <= 30
    step_scripts(agents, scenario.spec.agents, states, ego, cfg);
    CHECK(states[0].activated);
    CHECK(agents[0].speed == doctest::Approx(0.4));
    CHECK(agents[0].pose.y > -1.5);
}

TEST_CASE("waypoint follower stays near its path") {
    // circular path, radius 20
    std::vector<Vec2> circle;
    for (int i = 0; i <= 72; ++i) {
        const double a = 2.0 * kPi * i / 72.0;
        circle.push_back({20.0 * std::cos(a), 20.0 * std::sin(a)});
    }
    AgentState car;
    car.id = "c";
    car.pose = {20.0, 0.0, kPi / 2.0};
    car.speed = 5.0;

    AgentScript script;
    script.initial = car;
    script.behavior = WaypointFollow{circle, 5.0};

    ExpertConfig cfg;
    std::vector<AgentState> agents = {car};
    std::vector<ScriptState> states(1);
    EgoState far_ego;
    far_ego.pose = {500.0, 500.0, 0.0};

    double worst = 0.0;
    for (int frame = 0; frame < 400; ++frame) {
        step_scripts(agents, {script}, states, far_ego, cfg);
        const double r = agents[0].pose.position().norm();
        worst = std::max(worst, std::abs(r - 20.0));
    }
    CHECK(worst < 0.5);
}

TEST_CASE("route deviation beyond 5 m is logged once per excursion") {
    const LoadedScenario scenario = load(kStraight);
    const auto dense = densify_route(scenario.spec.route);
    InfractionTrackers trackers;
    InfractionLog log;
    EgoState ego;
    ego.pose = {50.0, 6.0, 0.0};  // 6 m off the lane
    ego.speed_mps = 5.0;

    check_infractions(ego, {}, {}, dense, 50, 100, scenario.config, trackers, log);
    check_infractions(ego, {}, {}, dense, 50, 101, scenario.config, trackers, log);
    REQUIRE(log.events.size() == 1);
    CHECK(log.events[0].kind == InfractionKind::route_deviation);

    ego.pose.y = 0.0;  // back on the route re-arms the tracker
    check_infractions(ego, {}, {}, dense, 50, 102, scenario.config, trackers, log);
    ego.pose.y = 6.0;
    check_infractions(ego, {}, {}, dense, 50, 103, scenario.config, trackers, log);
    CHECK(log.events.size() == 2);
}

TEST_CASE("collision events deduplicate per contact episode") {
    const LoadedScenario scenario = load(kStraight);
    const auto dense = densify_route(scenario.spec.route);
    InfractionTrackers trackers;
    InfractionLog log;
    EgoState ego;
    ego.pose = {50.0, 0.0, 0.0};
    AgentState other;
    other.id = "bump";
    other.pose = {51.0, 0.0, 0.0};  // overlapping

    for (int frame = 0; frame < 30; ++frame) {
        check_infractions(ego, {other}, {}, dense, 50, frame, scenario.config, trackers, log);
    }
    CHECK(log.events.size() == 1);  // one continuous contact episode

    // brief separation inside the 2 s window stays deduplicated
    other.pose.x = 80.0;
    check_infractions(ego, {other}, {}, dense, 50, 30, scenario.config, trackers, log);
    other.pose.x = 51.0;
    check_infractions(ego, {other}, {}, dense, 50, 31, scenario.config, trackers, log);
    CHECK(log.events.size() == 1);

    // re-contact after the window is a new event
    other.pose.x = 80.0;
    check_infractions(ego, {other}, {}, dense, 50, 60, scenario.config, trackers, log);
    other.pose.x = 51.0;
    check_infractions(ego, {other}, {}, dense, 50, 61, scenario.config, trackers, log);
    CHECK(log.events.size() == 2);
}

TEST_CASE("blocked termination fires after 30 s without progress") {
    // an immovable wall right in front of the ego on a long cap
    const std::string text = R"(
scenario_id = "walled"
scenario_type = "ahead_vehicle"
speed_limit_kmh = 50
duration_cap_s = 60

[[route]]
x = 0
y = 0

[[route]]
x = 400
y = 0

[[agents]]
id = "wall"
kind = "vehicle"
x = 12
y = 0
speed = 0
)";
    const RunResult result = run_scenario(load_scenario_string(text), 1);
    CHECK(result.terminated_by == TerminationReason::blocked);
    CHECK(result.infractions.events.empty());
    CHECK(result.sim_frames < 60 * 20);
}

TEST_CASE("frame records serialize with the documented keys") {
    const RunResult result = run_scenario(load(kStraight), 1);
    REQUIRE(!result.frames.empty());
    const std::string line = frame_record_to_json(result.frames.front());
    for (const char* key :
         {"\"scenario_id\"", "\"frame\"", "\"sim_time_s\"", "\"ego\"", "\"agents\"", "\"cot\"",
          "\"light_hazard\"", "\"stop_hazard\"", "\"collision_hazard\"", "\"is_junction\"",
          "\"ahead\"", "\"final_decision\"", "\"target_speed_kmh\"", "\"reason\"", "\"waypoints\"",
          "\"target_point\"", "\"nav_command\"", "\"route_type\""}) {
        CHECK(line.find(key) != std::string::npos);
    }
    const ParsedFrame parsed = parse_frame_json(line, 1);
    CHECK(parsed.scenario_id == "straight");
    CHECK(parsed.has_aspects);
    CHECK(parsed.has_final);
    CHECK(parsed.has_waypoints);
    CHECK(parsed.waypoints.size() == 10);
}
