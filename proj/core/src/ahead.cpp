#include "cotsim/ahead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cotsim/waypoints.hpp"

namespace cotsim {

namespace {

constexpr double kSearchWindow = 100.0;   // m along the route
constexpr double kLaneHalfWidth = 1.75;   // m, half of a 3.5 m lane
constexpr double kInf = std::numeric_limits<double>::infinity();

// Interval classification shared by the distance and TTC selectors.
// Thresholds are the upper bounds of Brake, SlowDown, FollowAhead.
AheadDecision classify(double value, double t_brake, double t_slow, double t_follow) {
    if (value < t_brake) return AheadDecision::Brake;
    if (value < t_slow) return AheadDecision::SlowDown;
    if (value < t_follow) return AheadDecision::FollowAhead;
    return AheadDecision::AimSpeedLimit;
}

struct Interval {
    double lo;
    double hi;     // +inf for AimSpeedLimit
    double width;  // finite width used for the band (neighbor width when unbounded)
};

Interval interval_of(AheadDecision d, double t_brake, double t_slow, double t_follow) {
    switch (d) {
        case AheadDecision::Brake: return {0.0, t_brake, t_brake};
        case AheadDecision::SlowDown: return {t_brake, t_slow, t_slow - t_brake};
        case AheadDecision::FollowAhead: return {t_slow, t_follow, t_follow - t_slow};
        case AheadDecision::AimSpeedLimit: return {t_follow, kInf, t_follow - t_slow};
        case AheadDecision::NearStaticApproach: break;
    }
    return {0.0, 0.0, 0.0};
}

}  // namespace

const char* to_string(AheadDecision d) {
    switch (d) {
        case AheadDecision::AimSpeedLimit: return "AimSpeedLimit";
        case AheadDecision::FollowAhead: return "FollowAhead";
        case AheadDecision::SlowDown: return "SlowDown";
        case AheadDecision::NearStaticApproach: return "NearStaticApproach";
        case AheadDecision::Brake: return "Brake";
    }
    return "?";
}

AheadDecision ahead_decision_from_string(const std::string& s) {
    if (s == "AimSpeedLimit") return AheadDecision::AimSpeedLimit;
    if (s == "FollowAhead") return AheadDecision::FollowAhead;
    if (s == "SlowDown") return AheadDecision::SlowDown;
    if (s == "NearStaticApproach") return AheadDecision::NearStaticApproach;
    if (s == "Brake") return AheadDecision::Brake;
    throw std::invalid_argument("unknown ahead decision '" + s + "'");
}

AheadObservation observe_ahead(const EgoState& ego, const std::vector<AgentState>& agents,
                               const std::vector<RouteWaypoint>& dense, std::size_t ego_index) {
    AheadObservation obs;
    const double ego_arc = dense[std::min(ego_index, dense.size() - 1)].arc_length;

    double best_gap = kInf;
    const AgentState* best = nullptr;
    for (const AgentState& agent : agents) {
        if (agent.kind != AgentKind::vehicle) {
            continue;
        }
        const std::size_t idx = project_onto_route(agent.pose.position(), dense, 0);
        const double lateral = (dense[idx].position - agent.pose.position()).norm();
        if (lateral > kLaneHalfWidth) {
            continue;  // not in the driving lane
        }
        const double along = dense[idx].arc_length - ego_arc;
        if (along <= 0.0 || along > kSearchWindow) {
            continue;
        }
        const double gap = std::max(0.0, along - ego.half_length - agent.half_length);
        if (gap < best_gap) {
            best_gap = gap;
            best = &agent;
        }
    }

    if (best == nullptr) {
        return obs;
    }
    obs.exists = true;
    obs.agent_id = best->id;
    obs.distance = best_gap;
    obs.ahead_speed = best->speed;
    obs.rel_speed = ego.speed_mps - best->speed;
    obs.ttc = obs.rel_speed > 0.0 ? obs.distance / obs.rel_speed : kInf;
    return obs;
}

AheadDecision ahead_decision(const AheadObservation& obs, AheadState& state,
                             double ego_target_kmh, const ExpertConfig& cfg) {
    const AheadThresholds& th = cfg.ahead;
    if (!obs.exists) {
        state.previous = AheadDecision::AimSpeedLimit;
        state.has_previous = true;
        return AheadDecision::AimSpeedLimit;
    }

    const bool use_distance =
        obs.distance < th.selector_near ||
        (obs.distance < th.selector_far && std::abs(obs.rel_speed) < th.selector_rel_speed);

    const double value = use_distance ? obs.distance : obs.ttc;
    const double t_brake = use_distance ? th.dist_brake : th.ttc_brake;
    const double t_slow = use_distance ? th.dist_slow_down : th.ttc_slow_down;
    const double t_follow = use_distance ? th.dist_follow : th.ttc_follow;

    AheadDecision decision = classify(value, t_brake, t_slow, t_follow);

    // damping: hold the previous decision while the value stays inside its
    // widened interval
    if (state.has_previous && state.previous != AheadDecision::NearStaticApproach &&
        th.hysteresis_band > 0.0 && decision != state.previous) {
        const Interval iv = interval_of(state.previous, t_brake, t_slow, t_follow);
        const double margin = th.hysteresis_band * iv.width;
        if (value >= iv.lo - margin && value < iv.hi + margin) {
            decision = state.previous;
        }
    }

    // near-static approach: both the implied target and the lead are crawling
    const double ahead_kmh = mps_to_kmh(obs.ahead_speed);
    double implied_kmh = ego_target_kmh;
    switch (decision) {
        case AheadDecision::FollowAhead: implied_kmh = ahead_kmh; break;
        case AheadDecision::SlowDown: implied_kmh = cfg.speeds.slow_down_factor * ahead_kmh; break;
        case AheadDecision::Brake: implied_kmh = 0.0; break;
        default: break;
    }
    if (implied_kmh <= cfg.speeds.near_static_cutoff && ahead_kmh <= cfg.speeds.near_static_cutoff) {
        decision = AheadDecision::NearStaticApproach;
    }

    state.previous = decision;
    state.has_previous = true;
    return decision;
}

}  // namespace cotsim
