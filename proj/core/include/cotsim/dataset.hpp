#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cotsim/cot.hpp"
#include "cotsim/sim.hpp"

namespace cotsim {

enum class Split { train, val, test };

const char* to_string(Split s);
Split split_from_string(const std::string& s);

struct SplitRatios {
    double train = 0.70;
    double val = 0.15;
    double test = 0.15;
};

/// One scenario to partition: id plus its stratification key
/// (scenario type x dominant final decision).
struct SplitItem {
    std::string scenario_id;
    std::string stratum;
};

/// Seeded stratified assignment, scenario-atomic by construction. Per-split
/// totals stay within +-1 of the largest-remainder targets. Throws on fewer
/// than 3 scenarios or ratios not summing to 1.
std::map<std::string, Split> make_splits(const std::vector<SplitItem>& items,
                                         const SplitRatios& ratios, std::uint64_t seed);

/// One frame as the statistics pass consumes it. The split name is free-form
/// ("unsplit" before assignment) so stats work on raw corpora too.
struct FrameSample {
    std::string split = "unsplit";
    SpeedDecisionClass final = SpeedDecisionClass::SpeedLimit;
    bool light_hazard = false;
    bool stop_hazard = false;
    bool collision_hazard = false;
    bool is_junction = false;
    bool ahead_exists = false;
    double ego_speed_kmh = 0.0;
};

struct CorpusStats {
    // keyed by split name ("train", "val", "test") plus "all"
    std::map<std::string, std::map<std::string, long>> decision_counts;
    std::map<std::string, std::map<std::string, long>> aspect_counts;
    std::map<std::string, std::vector<long>> speed_histogram;  // 5 km/h bins from 0
    long total_frames = 0;
};

/// Exact counts over the corpus; throws on an empty corpus.
CorpusStats compute_stats(const std::vector<FrameSample>& frames);

inline constexpr double kSpeedHistogramBin = 5.0;  // km/h

/// Corpus manifest entry: one scenario's metadata, run summary, and split.
struct ScenarioMeta {
    std::string scenario_id;
    std::string scenario_type;
    std::string weather;
    std::string time_of_day;
    std::string file;  // per-scenario JSONL, relative to the manifest
    int frames = 0;
    std::string dominant_decision;
    double completed_arc = 0.0;
    double total_arc = 0.0;
    std::string terminated_by;
    std::map<std::string, int> infraction_counts;
    std::string split;  // empty until assigned
};

std::string dominant_decision(const RunResult& result);

ScenarioMeta make_meta(const ScenarioSpec& spec, const RunResult& result, const std::string& file);

std::string manifest_to_json(const std::vector<ScenarioMeta>& entries);
std::vector<ScenarioMeta> manifest_from_json(const std::string& text);
void write_manifest(const std::vector<ScenarioMeta>& entries, const std::string& path);
std::vector<ScenarioMeta> read_manifest(const std::string& path);

}  // namespace cotsim
