#include "cotsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cotsim {

SpeedDecisionClass derive_final_from_aspects(const ParsedFrame& pred, const SpeedTable& speeds) {
    if (!pred.has_aspects) {
        throw std::invalid_argument("derive_final_from_aspects: frame " +
                                    std::to_string(pred.frame) + " is missing aspect labels");
    }
    CoTAspects aspects;
    aspects.light_hazard = pred.light_hazard;
    aspects.stop_hazard = pred.stop_hazard;
    aspects.collision_hazard = pred.collision_hazard;
    aspects.is_junction = pred.is_junction;
    aspects.nav_is_turn = pred.nav_is_turn;
    aspects.ahead_decision = ahead_decision_from_string(pred.ahead_decision);
    aspects.ahead.exists = aspects.ahead_decision != AheadDecision::AimSpeedLimit;
    return resolve(aspects, speeds).final;
}

std::map<SpeedDecisionClass, F1Entry> f1_per_class(const std::vector<SpeedDecisionClass>& gt,
                                                   const std::vector<SpeedDecisionClass>& pred) {
    if (gt.empty() || gt.size() != pred.size()) {
        throw std::invalid_argument("f1_per_class: label sequences must be aligned and non-empty");
    }
    std::map<SpeedDecisionClass, F1Entry> out;
    for (int c = 0; c < 6; ++c) {
        const auto cls = static_cast<SpeedDecisionClass>(c);
        F1Entry e;
        for (std::size_t i = 0; i < gt.size(); ++i) {
            const bool g = gt[i] == cls;
            const bool p = pred[i] == cls;
            if (g && p) ++e.tp;
            else if (!g && p) ++e.fp;
            else if (g && !p) ++e.fn;
        }
        if (e.tp + e.fp + e.fn == 0) {
            continue;  // class absent from both: undefined, omitted
        }
        e.f1 = 2.0 * static_cast<double>(e.tp) /
               static_cast<double>(2 * e.tp + e.fp + e.fn);
        out[cls] = e;
    }
    return out;
}

double first_waypoint_angle(const Vec2& first) {
    if (first.x == 0.0 && first.y == 0.0) {
        throw std::invalid_argument("first_waypoint_angle: zero-vector waypoint");
    }
    return std::atan2(first.y, first.x);
}

bool path_angle_accurate(const Vec2& gt_first, const Vec2& pred_first) {
    const double delta = normalize_yaw(first_waypoint_angle(gt_first) - first_waypoint_angle(pred_first));
    return std::abs(delta) <= deg2rad(kPathAngleToleranceDeg);
}

OpenLoopReport evaluate_open_loop(const std::vector<ParsedFrame>& gt,
                                  const std::vector<ParsedFrame>& pred, const SpeedTable& speeds) {
    if (gt.empty()) {
        throw std::invalid_argument("evaluate_open_loop: empty ground truth");
    }
    std::map<std::pair<std::string, int>, const ParsedFrame*> pred_by_key;
    for (const ParsedFrame& p : pred) {
        if (!pred_by_key.emplace(std::make_pair(p.scenario_id, p.frame), &p).second) {
            throw std::invalid_argument("evaluate_open_loop: duplicate prediction key (" +
                                        p.scenario_id + ", " + std::to_string(p.frame) + ")");
        }
    }

    OpenLoopReport report;
    std::vector<SpeedDecisionClass> gt_labels;
    std::vector<SpeedDecisionClass> pred_labels;
    gt_labels.reserve(gt.size());
    pred_labels.reserve(gt.size());

    for (const ParsedFrame& g : gt) {
        const auto it = pred_by_key.find({g.scenario_id, g.frame});
        if (it == pred_by_key.end()) {
            throw std::invalid_argument("evaluate_open_loop: prediction missing for (" +
                                        g.scenario_id + ", " + std::to_string(g.frame) + ")");
        }
        const ParsedFrame& p = *it->second;
        if (!g.has_final) {
            throw std::invalid_argument("evaluate_open_loop: ground truth missing final decision");
        }
        gt_labels.push_back(speed_decision_from_string(g.final_decision));
        if (p.has_aspects) {
            pred_labels.push_back(derive_final_from_aspects(p, speeds));
        } else if (p.has_final) {
            pred_labels.push_back(speed_decision_from_string(p.final_decision));
        } else {
            throw std::invalid_argument("evaluate_open_loop: prediction carries neither aspects "
                                        "nor a final decision");
        }

        if (g.has_waypoints && p.has_waypoints && !g.waypoints.empty() && !p.waypoints.empty()) {
            const std::string type = g.route_type.empty() ? "straight" : g.route_type;
            auto& bucket = report.path[type];
            bucket.total += 1;
            if (path_angle_accurate(g.waypoints.front(), p.waypoints.front())) {
                bucket.accurate += 1;
            }
        }
        report.frames += 1;
    }

    report.f1 = f1_per_class(gt_labels, pred_labels);
    return report;
}

ClosedLoopScore closed_loop_score(const std::vector<RouteResult>& results,
                                  const InfractionPenalties& penalties) {
    if (results.empty()) {
        throw std::invalid_argument("closed_loop_score: no route results");
    }
    auto penalty_for = [&](const std::string& kind) {
        if (kind == "collision_pedestrian") return penalties.collision_pedestrian;
        if (kind == "collision_vehicle") return penalties.collision_vehicle;
        if (kind == "red_light") return penalties.red_light;
        if (kind == "stop_sign") return penalties.stop_sign;
        if (kind == "route_deviation") return penalties.route_deviation;
        throw std::invalid_argument("closed_loop_score: unknown infraction kind '" + kind + "'");
    };

    ClosedLoopScore score;
    double ds_sum = 0.0, rc_sum = 0.0, is_sum = 0.0;
    for (const RouteResult& r : results) {
        ClosedLoopScore::Entry entry;
        entry.id = r.id;
        entry.rc =
            r.total_arc > 0.0 ? std::clamp(100.0 * r.completed_arc / r.total_arc, 0.0, 100.0) : 0.0;
        entry.is = 1.0;
        for (const auto& [kind, count] : r.infraction_counts) {
            entry.is *= std::pow(penalty_for(kind), count);
        }
        entry.ds = entry.rc * entry.is;
        ds_sum += entry.ds;
        rc_sum += entry.rc;
        is_sum += entry.is;
        score.routes.push_back(std::move(entry));
    }
    const auto n = static_cast<double>(score.routes.size());
    score.ds = ds_sum / n;
    score.rc = rc_sum / n;
    score.is = is_sum / n;
    return score;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string format_open_loop(const OpenLoopReport& report) {
    std::ostringstream out;
    out << "open_loop.frames = " << report.frames << "\n";
    for (const auto& [cls, entry] : report.f1) {
        out << "open_loop.f1." << to_string(cls) << " = " << fmt(entry.f1) << "\n";
    }
    for (const auto& [type, bucket] : report.path) {
        out << "open_loop.path_accuracy." << type << " = " << fmt(bucket.percent()) << "\n";
    }
    return out.str();
}

std::string format_closed_loop(const ClosedLoopScore& score) {
    std::ostringstream out;
    for (const auto& route : score.routes) {
        out << "closed_loop.route." << route.id << ".DS = " << fmt(route.ds) << "\n";
        out << "closed_loop.route." << route.id << ".RC = " << fmt(route.rc) << "\n";
        out << "closed_loop.route." << route.id << ".IS = " << fmt(route.is) << "\n";
    }
    out << "closed_loop.aggregate.DS = " << fmt(score.ds) << "\n";
    out << "closed_loop.aggregate.RC = " << fmt(score.rc) << "\n";
    out << "closed_loop.aggregate.IS = " << fmt(score.is) << "\n";
    return out.str();
}

}  // namespace cotsim
