// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Usage: acceptance [scenario_dir]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cotsim/control.hpp"
#include "cotsim/dataset.hpp"
#include "cotsim/frame_log.hpp"
#include "cotsim/hazards.hpp"
#include "cotsim/metrics.hpp"
#include "cotsim/sim.hpp"
#include "cotsim/waypoints.hpp"
#include "oracles.hpp"

using namespace cotsim;

namespace {

struct CheckFailure {
    std::string message;
};

#define ACCEPT(cond)                                                                     \
    do {                                                                                 \
        if (!(cond)) {                                                                   \
            throw CheckFailure{std::string(#cond) + " at " + __FILE__ + ":" +            \
                               std::to_string(__LINE__)};                                \
        }                                                                                \
    } while (0)

std::string g_scenario_dir = "scenarios";

std::vector<std::string> bundled_scenarios() {
    return {"signal_stop", "crossing_pedestrian", "lane_merge_cutin", "ahead_vehicle",
            "sharp_turn"};
}

LoadedScenario load_bundled(const std::string& name) {
    return load_scenario(g_scenario_dir + "/" + name + ".toml");
}

// -- criterion 1 -------------------------------------------------------------
void criterion_safety_distance() {
    ACCEPT(safety_distance(72.0) == 36.0);
    for (double v = 0.0; v < 30.0; v += 0.01) {
        ACCEPT(safety_distance(v) == 3.0);
    }
    // continuity gap at the 30 km/h branch point, pinned
    const double upper = safety_distance(30.0);
    const double gap = 3.0 - upper;
    ACCEPT(std::abs(upper - ((30.0 / 3.6) * (30.0 / 3.6) / 10.0 - 4.0)) < 1e-12);
    ACCEPT(std::abs(gap - 1.0 / 18.0) < 1e-12);
}

// -- criterion 2 -------------------------------------------------------------
void criterion_lookahead_formula() {
    for (double v = 0.0; v <= 130.0 + 1e-9; v += 0.1) {
        const double expect = v < 20.0 ? 4.0 : 0.5 * (v / 3.6) + 2.0;
        ACCEPT(first_waypoint_distance(v) == expect);
    }
    // strict branch point
    ACCEPT(first_waypoint_distance(19.9999999) == 4.0);
    ACCEPT(first_waypoint_distance(20.0) == 0.5 * (20.0 / 3.6) + 2.0);
}

// -- criterion 3 -------------------------------------------------------------
SpeedDecisionClass table_oracle(bool light, bool stop, bool collision, AheadDecision ahead,
                                bool junction, bool turn) {
    if (light || stop || collision) return SpeedDecisionClass::Brake;
    switch (ahead) {
        case AheadDecision::Brake: return SpeedDecisionClass::Brake;
        case AheadDecision::NearStaticApproach: return SpeedDecisionClass::SlowApproach;
        case AheadDecision::SlowDown: return SpeedDecisionClass::SlowDown;
        case AheadDecision::FollowAhead: return SpeedDecisionClass::FollowAhead;
        case AheadDecision::AimSpeedLimit: break;
    }
    return junction && turn ? SpeedDecisionClass::CautiousTurn : SpeedDecisionClass::SpeedLimit;
}

void criterion_decision_table() {
    const SpeedTable speeds;
    const AheadDecision all_ahead[5] = {AheadDecision::AimSpeedLimit, AheadDecision::FollowAhead,
                                        AheadDecision::SlowDown, AheadDecision::NearStaticApproach,
                                        AheadDecision::Brake};
    int combos = 0;
    for (int bits = 0; bits < 8; ++bits) {
        for (const AheadDecision ahead : all_ahead) {
            for (int junction = 0; junction < 2; ++junction) {
                for (int turn = 0; turn < 2; ++turn) {
                    CoTAspects a;
                    a.light_hazard = (bits & 1) != 0;
                    a.stop_hazard = (bits & 2) != 0;
                    a.collision_hazard = (bits & 4) != 0;
                    a.is_junction = junction != 0;
                    a.nav_is_turn = turn != 0;
                    a.ahead_decision = ahead;
                    a.ahead.exists = ahead != AheadDecision::AimSpeedLimit;
                    a.ahead.ahead_speed = 9.0;
                    a.speed_limit_kmh = 55.0;
                    ACCEPT(resolve(a, speeds).final ==
                           table_oracle(a.light_hazard, a.stop_hazard, a.collision_hazard, ahead,
                                        a.is_junction, a.nav_is_turn));
                    ++combos;
                }
            }
        }
    }
    ACCEPT(combos == 160);

    // hazard-dominance fuzz
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_real_distribution<double> limit(1.0, 130.0);
    std::uniform_real_distribution<double> speed(0.0, 30.0);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        CoTAspects a;
        a.light_hazard = coin(rng) != 0;
        a.stop_hazard = coin(rng) != 0;
        a.collision_hazard = coin(rng) != 0;
        a.is_junction = coin(rng) != 0;
        a.nav_is_turn = coin(rng) != 0;
        a.ahead_decision = static_cast<AheadDecision>(pick(rng));
        a.ahead.exists = coin(rng) != 0;
        a.ahead.ahead_speed = speed(rng);
        a.ahead.distance = 50.0 * speed(rng) / 30.0;
        a.speed_limit_kmh = limit(rng);
        const bool any_hazard = a.light_hazard || a.stop_hazard || a.collision_hazard;
        const CoTRecord rec = resolve(a, speeds);
        if (any_hazard && (rec.final != SpeedDecisionClass::Brake || rec.target_speed_kmh != 0.0)) {
            ++violations;
        }
    }
    ACCEPT(violations == 0);
}

// -- criterion 4 -------------------------------------------------------------
void criterion_collision_oracle() {
    std::mt19937 rng(211);
    std::uniform_real_distribution<double> speed_kmh(0.0, 120.0);
    std::uniform_real_distribution<double> pos(5.0, 90.0);
    std::uniform_real_distribution<double> lat(-9.0, 9.0);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> agent_speed(0.0, 22.0);
    std::uniform_real_distribution<double> accel(-2.5, 2.5);
    std::uniform_real_distribution<double> steer(-0.35, 0.35);
    std::uniform_int_distribution<int> agent_count(0, 5);
    std::uniform_int_distribution<int> kind(0, 4);

    const ExpertConfig cfg;
    std::vector<RouteWaypoint> sparse(2);
    sparse[0].position = {0, 0};
    sparse[1].position = {500, 0};
    const auto dense = densify_route(sparse);
    testoracle::FlatRoute route;
    for (const RouteWaypoint& wp : dense) {
        route.points.push_back(wp.position);
    }

    for (int scene = 0; scene < 200; ++scene) {
        EgoState ego;
        ego.pose = {0, 0, 0};
        ego.speed_mps = kmh_to_mps(speed_kmh(rng));
        const double target = speed_kmh(rng);

        std::vector<AgentState> agents;
        const int n = agent_count(rng);
        for (int i = 0; i < n; ++i) {
            AgentState a;
            a.id = "agent" + std::to_string(i);
            a.pose = {pos(rng), lat(rng), ang(rng)};
            a.speed = agent_speed(rng);
            a.accel = accel(rng);
            a.steer = steer(rng);
            if (kind(rng) == 0) {
                a.kind = AgentKind::pedestrian;
                a.steer = 0.0;
                a.half_length = 0.25;
                a.half_width = 0.25;
                a.speed = std::min(a.speed, 3.0);
            }
            agents.push_back(std::move(a));
        }

        HazardReport got;
        check_collision_hazard(ego, agents, {&dense, 0, target}, {}, cfg, got);

        const int frames = ego.speed_kmh() < 80.0 ? 40 : 60;
        testoracle::FlatState fe;
        fe.x = ego.pose.x;
        fe.y = ego.pose.y;
        fe.yaw = ego.pose.yaw;
        fe.v = ego.speed_mps;
        fe.hl = ego.half_length;
        fe.hw = ego.half_width;
        const auto ego_boxes = testoracle::flat_ego_rollout(
            fe, frames, route, 0, target, cfg.longitudinal.kp, cfg.longitudinal.ki,
            cfg.longitudinal.buffer_frames, cfg.lateral.kp, cfg.lateral.ki,
            cfg.lateral.buffer_frames, cfg.throttle_accel, cfg.brake_decel, cfg.wheelbase,
            cfg.max_steer, cfg.dt);

        std::vector<std::string> ids;
        std::vector<std::vector<OBB2D>> boxes;
        for (const AgentState& a : agents) {
            testoracle::FlatState fa;
            fa.x = a.pose.x;
            fa.y = a.pose.y;
            fa.yaw = a.pose.yaw;
            fa.v = a.speed;
            fa.accel = a.accel;
            fa.steer = a.steer;
            fa.pedestrian = a.kind == AgentKind::pedestrian;
            fa.hl = a.half_length;
            fa.hw = a.half_width;
            ids.push_back(a.id);
            boxes.push_back(testoracle::flat_rollout(fa, frames, cfg.wheelbase, cfg.max_steer, cfg.dt));
        }
        const auto expect = testoracle::brute_force_collision(ego_boxes, ids, boxes);
        ACCEPT(got.collision_hazard == expect.hazard);
        if (expect.hazard) {
            ACCEPT(got.first_collision_frame.has_value());
            ACCEPT(*got.first_collision_frame == expect.first_frame);
            ACCEPT(got.colliding_agent.value() == expect.agent);
        }
    }
}

// -- criterion 5 -------------------------------------------------------------
void criterion_obb_oracle() {
    std::mt19937 rng(307);
    std::uniform_real_distribution<double> span(-8.0, 8.0);
    std::uniform_real_distribution<double> near_span(-3.2, 3.2);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> ext(0.2, 2.5);

    int decisive = 0;
    for (int i = 0; i < 10000; ++i) {
        // half the pairs biased into near-touching territory
        const bool near = (i % 2) == 0;
        auto coord = [&]() { return near ? near_span(rng) : span(rng); };
        const OBB2D a{{coord(), coord(), ang(rng)}, ext(rng), ext(rng)};
        const OBB2D b{{coord(), coord(), ang(rng)}, ext(rng), ext(rng)};

        const bool got = obb_overlap(a, b);
        const auto oracle = testoracle::raster_overlap(a, b, 500'000);
        if (oracle.overlap) {
            ACCEPT(got);
            ++decisive;
        } else {
            const double margin = testoracle::sat_margin(a, b);
            if (std::abs(margin) > 2.0 * oracle.pitch) {
                ACCEPT(!got);
                ++decisive;
            }
        }
        // the pair must agree with the gap function as well
        ACCEPT((obb_min_distance(a, b) == 0.0) == got);
    }
    ACCEPT(decisive > 9000);
}

// -- criterion 6 -------------------------------------------------------------
void criterion_pid() {
    // longitudinal constant error fixture
    PIDController lon({0.3, 0.05, 0.0, 20}, 0.05);
    double out = 0.0;
    for (int i = 0; i < 20; ++i) {
        out = lon.step(10.0);
    }
    ACCEPT(std::abs(out - 3.5) < 1e-9);

    // lateral fixture at pi/4
    PIDController lat({0.8, 0.3, 0.0, 10}, 0.05);
    const double steer = lateral_control({4.0, 4.0}, lat);
    ACCEPT(std::abs(steer - 0.8639379797371932) < 1e-9);
    ACCEPT(std::abs(steer - 1.1 * kPi / 4.0) < 1e-12);

    // closed-loop settling on a straight route
    const char* straight = R"(
scenario_id = "settle"
scenario_type = "ahead_vehicle"
speed_limit_kmh = 50
duration_cap_s = 12

[[route]]
x = 0
y = 0

[[route]]
x = 500
y = 0
)";
    const RunResult run = run_scenario(load_scenario_string(straight), 1);
    bool settled = false;
    for (const FrameRecord& fr : run.frames) {
        if (fr.sim_time_s <= 10.0 && std::abs(fr.ego.speed_kmh() - 50.0) <= 0.05 * 50.0) {
            settled = true;
        }
    }
    ACCEPT(settled);
}

// -- criterion 7 -------------------------------------------------------------
void criterion_determinism() {
    for (const std::string& name : bundled_scenarios()) {
        const LoadedScenario scenario = load_bundled(name);
        const RunResult a = run_scenario(scenario, 1);
        const RunResult b = run_scenario(scenario, 1);
        ACCEPT(run_to_jsonl(a) == run_to_jsonl(b));
    }
    // the red-light scenario is pinned short of its route end: full 20 s cap
    const RunResult capped = run_scenario(load_bundled("signal_stop"), 1);
    ACCEPT(capped.terminated_by == TerminationReason::duration_cap);
    ACCEPT(capped.sim_frames == 400);
    ACCEPT(capped.frames.size() == 40);
}

// -- criterion 8 -------------------------------------------------------------
void criterion_expert_safety() {
    int collisions = 0;
    for (const std::string& name : bundled_scenarios()) {
        const RunResult run = run_scenario(load_bundled(name), 1);
        for (const InfractionEvent& ev : run.infractions.events) {
            if (ev.kind == InfractionKind::collision_vehicle ||
                ev.kind == InfractionKind::collision_pedestrian) {
                ++collisions;
            }
        }
    }
    ACCEPT(collisions == 0);

    const RunResult red = run_scenario(load_bundled("signal_stop"), 1);
    bool braked_for_light = false;
    for (const FrameRecord& fr : red.frames) {
        if (fr.cot.final == SpeedDecisionClass::Brake && fr.cot.aspects.light_hazard &&
            fr.cot.reason.find("light") != std::string::npos) {
            braked_for_light = true;
        }
    }
    ACCEPT(braked_for_light);
}

// -- criterion 9 -------------------------------------------------------------
void criterion_evaluator() {
    const RunResult run = run_scenario(load_bundled("ahead_vehicle"), 1);
    std::vector<ParsedFrame> gt;
    int n = 0;
    for (const FrameRecord& fr : run.frames) {
        gt.push_back(parse_frame_json(frame_record_to_json(fr), ++n));
    }
    const SpeedTable speeds;
    const OpenLoopReport self = evaluate_open_loop(gt, gt, speeds);
    ACCEPT(!self.f1.empty());
    for (const auto& [cls, entry] : self.f1) {
        ACCEPT(entry.f1 == 1.0);
    }
    for (const auto& [type, bucket] : self.path) {
        ACCEPT(bucket.percent() == 100.0);
    }

    // TP=FP=FN=1 fixture
    using C = SpeedDecisionClass;
    const auto f1 = f1_per_class({C::Brake, C::SpeedLimit, C::Brake},
                                 {C::Brake, C::Brake, C::SpeedLimit});
    ACCEPT(std::abs(f1.at(C::Brake).f1 - 0.5) < 1e-12);

    // 2-degree boundary fixtures
    auto at_deg = [](double deg) {
        return Vec2{6.0 * std::cos(deg2rad(deg)), 6.0 * std::sin(deg2rad(deg))};
    };
    ACCEPT(path_angle_accurate(at_deg(10.0), at_deg(11.5)));
    ACCEPT(!path_angle_accurate(at_deg(10.0), at_deg(12.5)));
    ACCEPT(path_angle_accurate(at_deg(179.5), at_deg(-179.5)));
}

// -- criterion 10 ------------------------------------------------------------
void criterion_splits() {
    std::mt19937 rng(409);
    std::uniform_int_distribution<int> type_pick(0, 4);
    std::uniform_int_distribution<int> decision_pick(0, 5);
    const char* types[5] = {"signal_stop", "crossing_pedestrian", "lane_merge_cutin",
                            "ahead_vehicle", "sharp_turn"};

    std::vector<SplitItem> items;
    std::map<std::string, std::string> type_of;
    for (int i = 0; i < 1000; ++i) {
        const std::string id = "synthetic" + std::to_string(i);
        const std::string type = types[type_pick(rng)];
        items.push_back({id, type + "/" + to_string(static_cast<SpeedDecisionClass>(decision_pick(rng)))});
        type_of[id] = type;
    }

    const auto assignment = make_splits(items, {}, 77);
    const auto again = make_splits(items, {}, 77);
    ACCEPT(assignment == again);

    std::map<Split, int> totals;
    std::map<std::string, int> type_totals;
    std::map<Split, std::map<std::string, int>> type_by_split;
    for (const auto& [id, split] : assignment) {
        totals[split] += 1;
        type_totals[type_of[id]] += 1;
        type_by_split[split][type_of[id]] += 1;
    }
    ACCEPT(std::abs(totals[Split::train] - 700) <= 1);
    ACCEPT(std::abs(totals[Split::val] - 150) <= 1);
    ACCEPT(std::abs(totals[Split::test] - 150) <= 1);

    // stratification: per-split type shares within 5 points of the corpus share
    for (const auto& [split, counts] : type_by_split) {
        int split_total = 0;
        for (const auto& [type, c] : counts) {
            split_total += c;
        }
        for (const auto& [type, total] : type_totals) {
            const int c = counts.count(type) ? counts.at(type) : 0;
            const double share = 100.0 * c / split_total;
            const double corpus_share = 100.0 * total / 1000.0;
            ACCEPT(std::abs(share - corpus_share) <= 5.0);
        }
    }
}

struct Criterion {
    int number;
    const char* label;
    std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        g_scenario_dir = argv[1];
    }

    const std::vector<Criterion> criteria = {
        {1, "safety_distance formula (72 -> 36 m, flat below 30, pinned branch gap)",
         criterion_safety_distance},
        {2, "first_waypoint_distance sweep 0-130 km/h at 0.1 resolution", criterion_lookahead_formula},
        {3, "decision table: 160-case enumeration + 1e5 hazard-dominance fuzz",
         criterion_decision_table},
        {4, "collision checker vs brute-force oracle on 200 random scenes",
         criterion_collision_oracle},
        {5, "box overlap vs rasterization oracle on 1e4 pairs", criterion_obb_oracle},
        {6, "PID fixtures to 1e-9 and closed-loop settling within 10 s", criterion_pid},
        {7, "bit-identical reruns; 20 s cap = 400 frames / 40 records", criterion_determinism},
        {8, "zero collisions across the bundled corpus; brake names the red light",
         criterion_expert_safety},
        {9, "self-evaluation: F1 1.0, path 100%, confusion and 2-degree fixtures",
         criterion_evaluator},
        {10, "70/15/15 stratified scenario-atomic splits on 1000 synthetic scenarios",
         criterion_splits},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.run();
        } catch (const CheckFailure& f) {
            error = f.message;
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty()) {
            std::printf("[PASS] criterion %2d (%.2fs): %s\n", c.number, secs, c.label);
        } else {
            std::printf("[FAIL] criterion %2d (%.2fs): %s\n        %s\n", c.number, secs, c.label,
                        error.c_str());
            ++failed;
        }
    }
    if (failed > 0) {
        std::printf("%d of %zu criteria failed\n", failed, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
