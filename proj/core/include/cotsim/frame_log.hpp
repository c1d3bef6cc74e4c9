#pragma once

#include <string>
#include <vector>

#include "cotsim/sim.hpp"

namespace cotsim {

/// One FrameRecord as a single-line JSON object with the documented keys.
std::string frame_record_to_json(const FrameRecord& record);

/// All records of a run, one JSON object per line.
std::string run_to_jsonl(const RunResult& result);

void write_run_jsonl(const RunResult& result, const std::string& path);

/// Parsed view of a logged or predicted frame, as the evaluator consumes it.
/// Aspect fields are optional so prediction files may carry either the
/// chain-of-thought block or just a final decision.
struct ParsedFrame {
    std::string scenario_id;
    int frame = 0;
    bool has_aspects = false;
    bool light_hazard = false;
    bool stop_hazard = false;
    bool collision_hazard = false;
    bool is_junction = false;
    std::string ahead_decision;  // empty when absent
    bool has_final = false;
    std::string final_decision;
    double target_speed_kmh = 0.0;
    bool nav_is_turn = false;
    bool has_waypoints = false;
    std::vector<Vec2> waypoints;
    std::string route_type;       // empty when absent
    double ego_speed_kmh = 0.0;
};

/// Reads a JSONL file of frame records or predictions. Throws on malformed
/// lines with the 1-based line number.
std::vector<ParsedFrame> read_frames_jsonl(const std::string& path);

ParsedFrame parse_frame_json(const std::string& line, int line_number);

}  // namespace cotsim
