#include "cotsim/cot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <stdexcept>

namespace cotsim {

const char* to_string(SpeedDecisionClass c) {
    switch (c) {
        case SpeedDecisionClass::SpeedLimit: return "SpeedLimit";
        case SpeedDecisionClass::FollowAhead: return "FollowAhead";
        case SpeedDecisionClass::SlowDown: return "SlowDown";
        case SpeedDecisionClass::SlowApproach: return "SlowApproach";
        case SpeedDecisionClass::CautiousTurn: return "CautiousTurn";
        case SpeedDecisionClass::Brake: return "Brake";
    }
    return "?";
}

SpeedDecisionClass speed_decision_from_string(const std::string& s) {
    if (s == "SpeedLimit") return SpeedDecisionClass::SpeedLimit;
    if (s == "FollowAhead") return SpeedDecisionClass::FollowAhead;
    if (s == "SlowDown") return SpeedDecisionClass::SlowDown;
    if (s == "SlowApproach") return SpeedDecisionClass::SlowApproach;
    if (s == "CautiousTurn") return SpeedDecisionClass::CautiousTurn;
    if (s == "Brake") return SpeedDecisionClass::Brake;
    throw std::invalid_argument("unknown speed decision '" + s + "'");
}

CoTRecord resolve(const CoTAspects& aspects, const SpeedTable& speeds, std::uint64_t template_seed) {
    CoTRecord rec;
    rec.aspects = aspects;

    const double ahead_kmh = mps_to_kmh(aspects.ahead.ahead_speed);

    if (aspects.light_hazard || aspects.stop_hazard || aspects.collision_hazard) {
        rec.final = SpeedDecisionClass::Brake;
        rec.target_speed_kmh = 0.0;
        if (aspects.light_hazard) {
            rec.brake_cause = BrakeCause::red_light;
        } else if (aspects.stop_hazard) {
            rec.brake_cause = BrakeCause::stop_sign;
        } else {
            rec.brake_cause = BrakeCause::collision;
        }
    } else {
        switch (aspects.ahead_decision) {
            case AheadDecision::Brake:
                rec.final = SpeedDecisionClass::Brake;
                rec.target_speed_kmh = 0.0;
                rec.brake_cause = BrakeCause::ahead_vehicle;
                break;
            case AheadDecision::NearStaticApproach:
                rec.final = SpeedDecisionClass::SlowApproach;
                rec.target_speed_kmh = speeds.slow_approach;
                break;
            case AheadDecision::SlowDown:
                rec.final = SpeedDecisionClass::SlowDown;
                rec.target_speed_kmh = speeds.slow_down_factor * ahead_kmh;
                break;
            case AheadDecision::FollowAhead:
                rec.final = SpeedDecisionClass::FollowAhead;
                rec.target_speed_kmh = ahead_kmh;
                break;
            case AheadDecision::AimSpeedLimit:
                if (aspects.is_junction && aspects.nav_is_turn) {
                    rec.final = SpeedDecisionClass::CautiousTurn;
                    rec.target_speed_kmh = std::min(speeds.cautious_turn, aspects.speed_limit_kmh);
                } else {
                    rec.final = SpeedDecisionClass::SpeedLimit;
                    rec.target_speed_kmh = aspects.speed_limit_kmh;
                }
                break;
        }
    }

    // the sharp-turn cap applies to every branch
    if (aspects.is_junction && aspects.nav_is_turn) {
        rec.target_speed_kmh = std::min(rec.target_speed_kmh, speeds.cautious_turn);
    }

    rec.reason = render_reason(rec, template_seed);
    return rec;
}

namespace {

std::string fmt1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

// {0} -> first argument, {1} -> second
std::string fill(const char* tmpl, const std::string& a0, const std::string& a1 = "") {
    std::string out;
    for (const char* p = tmpl; *p != '\0'; ++p) {
        if (p[0] == '{' && p[1] != '\0' && p[2] == '}') {
            out += (p[1] == '0') ? a0 : a1;
            p += 2;
        } else {
            out.push_back(*p);
        }
    }
    return out;
}

}  // namespace

std::string render_reason(const CoTRecord& rec, std::uint64_t seed) {
    const std::size_t pick = static_cast<std::size_t>(seed % 3);
    const CoTAspects& a = rec.aspects;

    switch (rec.final) {
        case SpeedDecisionClass::Brake: {
            switch (rec.brake_cause) {
                case BrakeCause::red_light: {
                    static constexpr std::array<const char*, 3> pool = {
                        "Braking: red traffic light {0} ahead on the planned lane.",
                        "Emergency brake for the red traffic light {0}.",
                        "Stopping because traffic light {0} is red for our lane.",
                    };
                    return fill(pool[pick], a.light_id);
                }
                case BrakeCause::stop_sign: {
                    static constexpr std::array<const char*, 3> pool = {
                        "Braking: stop sign {0} ahead requires a full stop.",
                        "Emergency brake for the stop sign {0}.",
                        "Stopping for the stop sign {0} on the planned lane.",
                    };
                    return fill(pool[pick], a.stop_id);
                }
                case BrakeCause::collision: {
                    static constexpr std::array<const char*, 3> pool = {
                        "Braking to avoid a potential collision with {0} about {1} m ahead.",
                        "Emergency brake: predicted collision with {0} ({1} m away).",
                        "Stopping because {0} at {1} m is on a collision course.",
                    };
                    return fill(pool[pick], a.collision_agent.value_or("an agent"),
                                fmt1(a.collision_agent_distance));
                }
                case BrakeCause::ahead_vehicle:
                case BrakeCause::none: {
                    static constexpr std::array<const char*, 3> pool = {
                        "Braking: the vehicle ahead is only {0} m away.",
                        "Emergency brake behind the lead vehicle ({0} m gap).",
                        "Stopping: too close to the vehicle ahead ({0} m).",
                    };
                    return fill(pool[pick], fmt1(a.ahead.distance));
                }
            }
            return "Braking.";
        }
        case SpeedDecisionClass::FollowAhead: {
            static constexpr std::array<const char*, 3> pool = {
                "Following the vehicle ahead at {0} km/h with a {1} m gap.",
                "Matching the lead vehicle speed of {0} km/h.",
                "Keeping pace with the vehicle ahead ({1} m gap, {0} km/h).",
            };
            return fill(pool[pick], fmt1(mps_to_kmh(a.ahead.ahead_speed)), fmt1(a.ahead.distance));
        }
        case SpeedDecisionClass::SlowDown: {
            static constexpr std::array<const char*, 3> pool = {
                "Slowing down: closing on the vehicle ahead ({0} m gap).",
                "Reducing speed to {1} km/h behind the lead vehicle.",
                "Slowing toward {1} km/h; the gap ahead is {0} m.",
            };
            return fill(pool[pick], fmt1(a.ahead.distance), fmt1(rec.target_speed_kmh));
        }
        case SpeedDecisionClass::SlowApproach: {
            static constexpr std::array<const char*, 3> pool = {
                "Creeping forward at {0} km/h toward the near-static vehicle ahead.",
                "Near-static approach at {0} km/h; the lead vehicle is almost stopped.",
                "Approaching the stopped traffic ahead slowly at {0} km/h.",
            };
            return fill(pool[pick], fmt1(rec.target_speed_kmh));
        }
        case SpeedDecisionClass::CautiousTurn: {
            static constexpr std::array<const char*, 3> pool = {
                "Slowing to {0} km/h for the turn inside the junction.",
                "Cautious turn: capping speed at {0} km/h through the junction.",
                "Taking the junction turn at no more than {0} km/h.",
            };
            return fill(pool[pick], fmt1(rec.target_speed_kmh));
        }
        case SpeedDecisionClass::SpeedLimit: {
            static constexpr std::array<const char*, 3> pool = {
                "Clear road: aiming for the speed limit of {0} km/h.",
                "No hazards detected; tracking the speed limit ({0} km/h).",
                "Free driving toward the {0} km/h speed limit.",
            };
            return fill(pool[pick], fmt1(a.speed_limit_kmh));
        }
    }
    return "";
}

}  // namespace cotsim
