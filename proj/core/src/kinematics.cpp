#include "cotsim/kinematics.hpp"

#include <algorithm>
#include <stdexcept>

namespace cotsim {

AgentState bicycle_step(const AgentState& agent, const BicycleParams& params) {
    AgentState next = agent;
    const double v = agent.speed;
    const double dt = params.dt;

    if (agent.kind == AgentKind::pedestrian) {
        // constant-velocity point mass, zero turn rate
        next.pose.x += v * std::cos(agent.pose.yaw) * dt;
        next.pose.y += v * std::sin(agent.pose.yaw) * dt;
        return next;
    }

    const double steer = std::clamp(agent.steer, -params.max_steer, params.max_steer);
    next.pose.x += v * std::cos(agent.pose.yaw) * dt;
    next.pose.y += v * std::sin(agent.pose.yaw) * dt;
    next.pose.yaw = normalize_yaw(agent.pose.yaw + (v / params.wheelbase) * std::tan(steer) * dt);
    next.speed = std::max(0.0, v + agent.accel * dt);
    return next;
}

Rollout predict_agent_rollout(const AgentState& agent, int frames, const BicycleParams& params) {
    if (frames <= 0) {
        throw std::invalid_argument("predict_agent_rollout: frames must be positive");
    }
    Rollout out;
    out.poses.reserve(static_cast<std::size_t>(frames));
    out.speeds.reserve(static_cast<std::size_t>(frames));
    out.boxes.reserve(static_cast<std::size_t>(frames));

    AgentState state = agent;
    for (int i = 0; i < frames; ++i) {
        state = bicycle_step(state, params);
        out.poses.push_back(state.pose);
        out.speeds.push_back(state.speed);
        out.boxes.push_back(state.box());
    }
    return out;
}

}  // namespace cotsim
