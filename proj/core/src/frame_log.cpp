#include "cotsim/frame_log.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cotsim {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json ego_to_json(const EgoState& ego) {
    return ordered_json{{"x", ego.pose.x},
                        {"y", ego.pose.y},
                        {"yaw", ego.pose.yaw},
                        {"speed_kmh", ego.speed_kmh()},
                        {"lane_id", ego.lane_id},
                        {"road_id", ego.road_id},
                        {"half_length", ego.half_length},
                        {"half_width", ego.half_width}};
}

ordered_json agent_to_json(const AgentState& a) {
    return ordered_json{{"id", a.id},
                        {"kind", to_string(a.kind)},
                        {"x", a.pose.x},
                        {"y", a.pose.y},
                        {"yaw", a.pose.yaw},
                        {"speed_mps", a.speed},
                        {"lane_id", a.lane_id},
                        {"half_length", a.half_length},
                        {"half_width", a.half_width}};
}

ordered_json ahead_to_json(const AheadObservation& obs, AheadDecision decision) {
    ordered_json j;
    j["exists"] = obs.exists;
    if (obs.exists) {
        j["agent_id"] = obs.agent_id.value_or("");
        j["distance_m"] = obs.distance;
        j["rel_speed_mps"] = obs.rel_speed;
        if (std::isfinite(obs.ttc)) {
            j["ttc_s"] = obs.ttc;
        } else {
            j["ttc_s"] = nullptr;  // not closing
        }
        j["speed_mps"] = obs.ahead_speed;
    }
    j["decision"] = to_string(decision);
    return j;
}

}  // namespace

std::string frame_record_to_json(const FrameRecord& record) {
    ordered_json j;
    j["scenario_id"] = record.scenario_id;
    j["frame"] = record.frame;
    j["sim_time_s"] = record.sim_time_s;
    j["ego"] = ego_to_json(record.ego);
    j["agents"] = ordered_json::array();
    for (const AgentState& a : record.agents) {
        j["agents"].push_back(agent_to_json(a));
    }
    ordered_json cot;
    cot["light_hazard"] = record.cot.aspects.light_hazard;
    cot["stop_hazard"] = record.cot.aspects.stop_hazard;
    cot["collision_hazard"] = record.cot.aspects.collision_hazard;
    cot["is_junction"] = record.cot.aspects.is_junction;
    cot["ahead"] = ahead_to_json(record.cot.aspects.ahead, record.cot.aspects.ahead_decision);
    cot["final_decision"] = to_string(record.cot.final);
    cot["target_speed_kmh"] = record.cot.target_speed_kmh;
    cot["reason"] = record.cot.reason;
    j["cot"] = std::move(cot);

    ordered_json wps = ordered_json::array();
    for (const Vec2& wp : record.plan.waypoints) {
        wps.push_back(ordered_json::array({wp.x, wp.y}));
    }
    j["waypoints"] = std::move(wps);
    j["target_point"] = ordered_json::array({record.target_point.x, record.target_point.y});
    j["nav_command"] = to_string(record.nav_command);
    j["route_type"] = record.route_type;
    return j.dump();
}

std::string run_to_jsonl(const RunResult& result) {
    std::ostringstream out;
    for (const FrameRecord& fr : result.frames) {
        out << frame_record_to_json(fr) << "\n";
    }
    return out.str();
}

void write_run_jsonl(const RunResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << run_to_jsonl(result);
}

ParsedFrame parse_frame_json(const std::string& line, int line_number) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const std::exception& e) {
        throw std::runtime_error("line " + std::to_string(line_number) + ": " + e.what());
    }
    ParsedFrame f;
    try {
        f.scenario_id = j.at("scenario_id").get<std::string>();
        f.frame = j.at("frame").get<int>();
        if (j.contains("ego") && j["ego"].contains("speed_kmh")) {
            f.ego_speed_kmh = j["ego"]["speed_kmh"].get<double>();
        }
        if (j.contains("cot")) {
            const auto& cot = j["cot"];
            if (cot.contains("light_hazard") && cot.contains("stop_hazard") &&
                cot.contains("collision_hazard") && cot.contains("is_junction") &&
                cot.contains("ahead") && cot["ahead"].contains("decision")) {
                f.has_aspects = true;
                f.light_hazard = cot["light_hazard"].get<bool>();
                f.stop_hazard = cot["stop_hazard"].get<bool>();
                f.collision_hazard = cot["collision_hazard"].get<bool>();
                f.is_junction = cot["is_junction"].get<bool>();
                f.ahead_decision = cot["ahead"]["decision"].get<std::string>();
            }
            if (cot.contains("final_decision")) {
                f.has_final = true;
                f.final_decision = cot["final_decision"].get<std::string>();
            }
            if (cot.contains("target_speed_kmh")) {
                f.target_speed_kmh = cot["target_speed_kmh"].get<double>();
            }
        }
        if (j.contains("nav_command")) {
            const std::string nav = j["nav_command"].get<std::string>();
            f.nav_is_turn = nav == "turn_left" || nav == "turn_right";
        }
        if (j.contains("waypoints")) {
            f.has_waypoints = true;
            for (const auto& wp : j["waypoints"]) {
                f.waypoints.push_back({wp.at(0).get<double>(), wp.at(1).get<double>()});
            }
        }
        if (j.contains("route_type")) {
            f.route_type = j["route_type"].get<std::string>();
        }
    } catch (const ordered_json::exception& e) {
        throw std::runtime_error("line " + std::to_string(line_number) + ": " + e.what());
    }
    return f;
}

std::vector<ParsedFrame> read_frames_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::vector<ParsedFrame> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) {
            continue;
        }
        out.push_back(parse_frame_json(line, n));
    }
    return out;
}

}  // namespace cotsim
