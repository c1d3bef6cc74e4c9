#pragma once

#include <vector>

#include "cotsim/geometry.hpp"
#include "cotsim/world.hpp"

namespace cotsim {

/// Bicycle-model stepping parameters. dt is pinned to the 20 FPS lockstep.
struct BicycleParams {
    double wheelbase = 2.9;  // m, > 0
    double max_steer = 1.22; // rad, tan() clamp bound
    double dt = 0.05;        // s, exactly 1/20
};

/// Forward-predicted trajectory: per-frame pose + speed and derived boxes.
struct Rollout {
    std::vector<Pose2D> poses;
    std::vector<double> speeds;  // m/s
    std::vector<OBB2D> boxes;

    std::size_t size() const { return poses.size(); }
};

/// Advances one agent a single dt under its current (accel, steer).
/// speed' = max(0, speed + accel*dt); yaw' advances by (speed/L)*tan(steer)*dt;
/// position advances along the pre-step heading. Pedestrians keep a zero
/// turn rate and constant speed.
AgentState bicycle_step(const AgentState& agent, const BicycleParams& params);

/// Rolls an agent forward with its action held constant over `frames` steps.
/// Throws on frames == 0.
Rollout predict_agent_rollout(const AgentState& agent, int frames, const BicycleParams& params);

}  // namespace cotsim
