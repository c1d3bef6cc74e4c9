#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cotsim/cot.hpp"
#include "cotsim/frame_log.hpp"
#include "cotsim/sim.hpp"

namespace cotsim {

/// Final decision derived from predicted chain-of-thought aspects, through
/// the same resolution tree the expert uses. Throws when an aspect is missing.
SpeedDecisionClass derive_final_from_aspects(const ParsedFrame& pred, const SpeedTable& speeds);

struct F1Entry {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double f1 = 0.0;
};

/// One-vs-rest F1 per class over aligned label sequences. Classes with no
/// ground-truth and no predicted positives are absent from the result.
/// Throws on empty or mismatched inputs.
std::map<SpeedDecisionClass, F1Entry> f1_per_class(const std::vector<SpeedDecisionClass>& gt,
                                                   const std::vector<SpeedDecisionClass>& pred);

/// Heading of the first planned waypoint in the ego frame; throws on a
/// zero-vector waypoint.
double first_waypoint_angle(const Vec2& first);

inline constexpr double kPathAngleToleranceDeg = 2.0;

/// A prediction is accurate when its first-waypoint angle is within 2 degrees
/// of the ground truth (wrap-aware).
bool path_angle_accurate(const Vec2& gt_first, const Vec2& pred_first);

struct PathAccuracyBucket {
    long accurate = 0;
    long total = 0;
    double percent() const { return total > 0 ? 100.0 * static_cast<double>(accurate) / static_cast<double>(total) : 0.0; }
};

/// Open-loop report: per-class F1 plus path accuracy per route type.
struct OpenLoopReport {
    std::map<SpeedDecisionClass, F1Entry> f1;
    std::map<std::string, PathAccuracyBucket> path;  // keyed straight|turn|lane_change
    long frames = 0;
};

/// Aligns gt and prediction frames on (scenario_id, frame) and evaluates.
/// Predictions may carry aspects (final derived via the resolution tree) or a
/// direct final decision. Throws on missing keys.
OpenLoopReport evaluate_open_loop(const std::vector<ParsedFrame>& gt,
                                  const std::vector<ParsedFrame>& pred, const SpeedTable& speeds);

/// Per-route closed-loop inputs: completion arcs and infraction counts.
struct RouteResult {
    std::string id;
    double completed_arc = 0.0;
    double total_arc = 0.0;
    std::map<std::string, int> infraction_counts;  // keyed by InfractionKind names
};

struct ClosedLoopScore {
    struct Entry {
        std::string id;
        double ds = 0.0;
        double rc = 0.0;
        double is = 1.0;
    };
    std::vector<Entry> routes;
    double ds = 0.0;  // aggregate arithmetic means
    double rc = 0.0;
    double is = 1.0;
};

/// RC = 100 * completed/total; IS = product of penalty^count; DS = RC * IS.
/// Throws on an empty input list.
ClosedLoopScore closed_loop_score(const std::vector<RouteResult>& results,
                                  const InfractionPenalties& penalties);

/// Stable-key `name = value` lines for CI diffing.
std::string format_open_loop(const OpenLoopReport& report);
std::string format_closed_loop(const ClosedLoopScore& score);

}  // namespace cotsim
