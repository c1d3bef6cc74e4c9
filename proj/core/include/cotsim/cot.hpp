#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cotsim/ahead.hpp"
#include "cotsim/config.hpp"

namespace cotsim {

/// Everything the resolution tree looks at for one frame. Complete by
/// construction: every field is populated each frame.
struct CoTAspects {
    bool light_hazard = false;
    std::string light_id;
    bool stop_hazard = false;
    std::string stop_id;
    bool collision_hazard = false;
    std::optional<std::string> collision_agent;
    double collision_agent_distance = 0.0;  // m
    bool is_junction = false;
    bool nav_is_turn = false;
    AheadObservation ahead;
    AheadDecision ahead_decision = AheadDecision::AimSpeedLimit;
    double speed_limit_kmh = 50.0;
};

enum class SpeedDecisionClass { SpeedLimit, FollowAhead, SlowDown, SlowApproach, CautiousTurn, Brake };

const char* to_string(SpeedDecisionClass c);
SpeedDecisionClass speed_decision_from_string(const std::string& s);

/// Which branch forced a Brake, for reason rendering.
enum class BrakeCause { none, red_light, stop_sign, collision, ahead_vehicle };

struct CoTRecord {
    CoTAspects aspects;
    SpeedDecisionClass final = SpeedDecisionClass::SpeedLimit;
    double target_speed_kmh = 0.0;
    BrakeCause brake_cause = BrakeCause::none;
    std::string reason;
};

/// Fixed-priority resolution: emergency-brake hazards first, then the
/// ahead-vehicle relation, then road structure. Inside a junction with a
/// turning command the target is capped at the cautious-turn speed no matter
/// which branch produced it.
CoTRecord resolve(const CoTAspects& aspects, const SpeedTable& speeds, std::uint64_t template_seed = 0);

/// Deterministic sentence from a fixed per-class template pool; numeric slots
/// are filled to one decimal. Identical (record, seed) yields identical bytes.
std::string render_reason(const CoTRecord& record, std::uint64_t template_seed);

}  // namespace cotsim
