#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cotsim/cot.hpp"
#include "cotsim/hazards.hpp"
#include "cotsim/kinematics.hpp"
#include "cotsim/scenario_io.hpp"
#include "cotsim/sim.hpp"
#include "cotsim/waypoints.hpp"

using namespace cotsim;

namespace {

std::vector<OBB2D> random_boxes(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pos(-15.0, 15.0);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> ext(0.3, 3.0);
    std::vector<OBB2D> boxes;
    boxes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        boxes.push_back({{pos(rng), pos(rng), ang(rng)}, ext(rng), ext(rng)});
    }
    return boxes;
}

void BM_ObbOverlap(benchmark::State& state) {
    const auto boxes = random_boxes(1024, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        const bool hit = obb_overlap(boxes[i % 1024], boxes[(i * 7 + 3) % 1024]);
        benchmark::DoNotOptimize(hit);
        ++i;
    }
}
BENCHMARK(BM_ObbOverlap);

void BM_ObbMinDistance(benchmark::State& state) {
    const auto boxes = random_boxes(1024, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        const double d = obb_min_distance(boxes[i % 1024], boxes[(i * 7 + 3) % 1024]);
        benchmark::DoNotOptimize(d);
        ++i;
    }
}
BENCHMARK(BM_ObbMinDistance);

void BM_AgentRollout(benchmark::State& state) {
    AgentState agent;
    agent.speed = 12.0;
    agent.accel = 0.5;
    agent.steer = 0.1;
    const BicycleParams params;
    for (auto _ : state) {
        const Rollout roll = predict_agent_rollout(agent, static_cast<int>(state.range(0)), params);
        benchmark::DoNotOptimize(roll.boxes.data());
    }
}
BENCHMARK(BM_AgentRollout)->Arg(40)->Arg(60);

void BM_CollisionCheck(benchmark::State& state) {
    std::vector<RouteWaypoint> sparse(2);
    sparse[0].position = {0, 0};
    sparse[1].position = {400, 0};
    const auto dense = densify_route(sparse);

    EgoState ego;
    ego.speed_mps = 15.0;
    std::vector<AgentState> agents;
    for (int i = 0; i < 5; ++i) {
        AgentState a;
        a.id = "a" + std::to_string(i);
        a.pose = {20.0 + 10.0 * i, (i % 2 == 0) ? 1.0 : -2.0, 0.1 * i};
        a.speed = 5.0 + i;
        agents.push_back(std::move(a));
    }
    const ExpertConfig cfg;
    for (auto _ : state) {
        HazardReport report;
        check_collision_hazard(ego, agents, {&dense, 0, 54.0}, {}, cfg, report);
        benchmark::DoNotOptimize(report.collision_hazard);
    }
}
BENCHMARK(BM_CollisionCheck);

void BM_Resolve(benchmark::State& state) {
    CoTAspects aspects;
    aspects.ahead_decision = AheadDecision::FollowAhead;
    aspects.ahead.exists = true;
    aspects.ahead.ahead_speed = 9.0;
    const SpeedTable speeds;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const CoTRecord rec = resolve(aspects, speeds, seed++);
        benchmark::DoNotOptimize(rec.target_speed_kmh);
    }
}
BENCHMARK(BM_Resolve);

void BM_RunScenario(benchmark::State& state) {
    const char* text = R"(
scenario_id = "bench"
scenario_type = "ahead_vehicle"
speed_limit_kmh = 50
duration_cap_s = 20

[[route]]
x = 0
y = 0

[[route]]
x = 400
y = 0

[[agents]]
id = "lead"
kind = "vehicle"
x = 40
y = 0
speed = 8
)";
    const LoadedScenario scenario = load_scenario_string(text);
    for (auto _ : state) {
        const RunResult result = run_scenario(scenario, 1);
        benchmark::DoNotOptimize(result.frames.data());
    }
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
