#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cotsim/config.hpp"
#include "cotsim/world.hpp"

namespace cotsim {

/// Relation to the nearest same-lane lead vehicle.
struct AheadObservation {
    bool exists = false;
    std::optional<std::string> agent_id;
    double distance = 0.0;     // bumper-to-bumper gap along the lane, m
    double rel_speed = 0.0;    // ego minus ahead, m/s; positive = closing
    double ttc = 0.0;          // distance/rel_speed when closing, else +inf
    double ahead_speed = 0.0;  // m/s
};

enum class AheadDecision { AimSpeedLimit, FollowAhead, SlowDown, NearStaticApproach, Brake };

const char* to_string(AheadDecision d);
AheadDecision ahead_decision_from_string(const std::string& s);

/// Damping state: the previous decision's interval is widened by the band
/// fraction before re-classification.
struct AheadState {
    AheadDecision previous = AheadDecision::AimSpeedLimit;
    bool has_previous = false;
};

/// Nearest agent whose box center projects onto the ego's current lane ahead
/// of the ego within a 100 m window. Lane membership is lateral: within half
/// a lane width (1.75 m) of the dense route.
AheadObservation observe_ahead(const EgoState& ego, const std::vector<AgentState>& agents,
                               const std::vector<RouteWaypoint>& dense, std::size_t ego_index);

/// The five-action relation. Uses the gap when it is small (or small with a
/// small speed difference), otherwise the time-to-collision, then applies
/// the near-static override and hysteresis.
AheadDecision ahead_decision(const AheadObservation& obs, AheadState& state,
                             double ego_target_kmh, const ExpertConfig& cfg);

}  // namespace cotsim
