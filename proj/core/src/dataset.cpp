#include "cotsim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cotsim {

const char* to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw std::invalid_argument("unknown split '" + s + "'");
}

std::map<std::string, Split> make_splits(const std::vector<SplitItem>& items,
                                         const SplitRatios& ratios, std::uint64_t seed) {
    if (items.size() < 3) {
        throw std::invalid_argument("make_splits: need at least 3 scenarios");
    }
    if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
        throw std::invalid_argument("make_splits: ratios must sum to 1");
    }

    // group by stratum; sort ids so input order is irrelevant
    std::map<std::string, std::vector<std::string>> strata;
    for (const SplitItem& item : items) {
        strata[item.stratum].push_back(item.scenario_id);
    }
    // hand-rolled Fisher-Yates: std::shuffle draws are implementation-defined,
    // this keeps assignments identical across standard libraries
    std::mt19937_64 rng(seed);
    std::vector<std::string> sequence;
    sequence.reserve(items.size());
    for (auto& [stratum, ids] : strata) {
        std::sort(ids.begin(), ids.end());
        for (std::size_t i = ids.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(ids[i - 1], ids[j]);
        }
        sequence.insert(sequence.end(), ids.begin(), ids.end());
    }

    // largest-deficit greedy keeps every split within +-1 of its share at
    // every prefix, and spreads each stratum's contiguous run proportionally
    const double ratio[3] = {ratios.train, ratios.val, ratios.test};
    long assigned[3] = {0, 0, 0};
    std::map<std::string, Split> out;
    long n = 0;
    for (const std::string& id : sequence) {
        int best = 0;
        double best_deficit = -1e18;
        for (int s = 0; s < 3; ++s) {
            const double deficit =
                ratio[s] * static_cast<double>(n + 1) - static_cast<double>(assigned[s]);
            if (deficit > best_deficit) {
                best_deficit = deficit;
                best = s;
            }
        }
        ++assigned[best];
        ++n;
        out[id] = static_cast<Split>(best);
    }
    return out;
}

CorpusStats compute_stats(const std::vector<FrameSample>& frames) {
    if (frames.empty()) {
        throw std::invalid_argument("compute_stats: empty corpus");
    }
    CorpusStats stats;
    stats.total_frames = static_cast<long>(frames.size());

    auto bump = [&](const std::string& split, const FrameSample& f) {
        stats.decision_counts[split][to_string(f.final)] += 1;
        auto& aspects = stats.aspect_counts[split];
        if (f.light_hazard) aspects["light_hazard"] += 1;
        if (f.stop_hazard) aspects["stop_hazard"] += 1;
        if (f.collision_hazard) aspects["collision_hazard"] += 1;
        if (f.is_junction) aspects["is_junction"] += 1;
        if (f.ahead_exists) aspects["ahead_exists"] += 1;
        auto& hist = stats.speed_histogram[split];
        const auto bin = static_cast<std::size_t>(
            std::max(0.0, std::floor(f.ego_speed_kmh / kSpeedHistogramBin)));
        if (hist.size() <= bin) {
            hist.resize(bin + 1, 0);
        }
        hist[bin] += 1;
    };

    for (const FrameSample& f : frames) {
        bump(f.split, f);
        bump("all", f);
    }
    return stats;
}

std::string dominant_decision(const RunResult& result) {
    long counts[6] = {0, 0, 0, 0, 0, 0};
    for (const FrameRecord& fr : result.frames) {
        counts[static_cast<int>(fr.cot.final)] += 1;
    }
    int best = 0;
    for (int i = 1; i < 6; ++i) {
        if (counts[i] > counts[best]) {
            best = i;
        }
    }
    return to_string(static_cast<SpeedDecisionClass>(best));
}

ScenarioMeta make_meta(const ScenarioSpec& spec, const RunResult& result, const std::string& file) {
    ScenarioMeta meta;
    meta.scenario_id = spec.scenario_id;
    meta.scenario_type = to_string(spec.scenario_type);
    meta.weather = spec.weather;
    meta.time_of_day = spec.time_of_day;
    meta.file = file;
    meta.frames = static_cast<int>(result.frames.size());
    meta.dominant_decision = dominant_decision(result);
    meta.completed_arc = result.completed_arc;
    meta.total_arc = result.total_arc;
    meta.terminated_by = to_string(result.terminated_by);
    for (const InfractionEvent& ev : result.infractions.events) {
        meta.infraction_counts[to_string(ev.kind)] += 1;
    }
    return meta;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json meta_to_json(const ScenarioMeta& m) {
    ordered_json j;
    j["scenario_id"] = m.scenario_id;
    j["scenario_type"] = m.scenario_type;
    j["weather"] = m.weather;
    j["time_of_day"] = m.time_of_day;
    j["file"] = m.file;
    j["frames"] = m.frames;
    j["dominant_decision"] = m.dominant_decision;
    j["completed_arc_m"] = m.completed_arc;
    j["total_arc_m"] = m.total_arc;
    j["terminated_by"] = m.terminated_by;
    j["infractions"] = ordered_json::object();
    for (const auto& [kind, count] : m.infraction_counts) {
        j["infractions"][kind] = count;
    }
    j["split"] = m.split;
    return j;
}

ScenarioMeta meta_from_json(const ordered_json& j) {
    ScenarioMeta m;
    m.scenario_id = j.at("scenario_id").get<std::string>();
    m.scenario_type = j.at("scenario_type").get<std::string>();
    m.weather = j.value("weather", "");
    m.time_of_day = j.value("time_of_day", "");
    m.file = j.at("file").get<std::string>();
    m.frames = j.at("frames").get<int>();
    m.dominant_decision = j.value("dominant_decision", "");
    m.completed_arc = j.at("completed_arc_m").get<double>();
    m.total_arc = j.at("total_arc_m").get<double>();
    m.terminated_by = j.value("terminated_by", "");
    if (j.contains("infractions")) {
        for (const auto& [kind, count] : j["infractions"].items()) {
            m.infraction_counts[kind] = count.get<int>();
        }
    }
    m.split = j.value("split", "");
    return m;
}

}  // namespace

std::string manifest_to_json(const std::vector<ScenarioMeta>& entries) {
    ordered_json j;
    j["scenarios"] = ordered_json::array();
    for (const ScenarioMeta& m : entries) {
        j["scenarios"].push_back(meta_to_json(m));
    }
    return j.dump(2) + "\n";
}

std::vector<ScenarioMeta> manifest_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    std::vector<ScenarioMeta> out;
    for (const auto& entry : j.at("scenarios")) {
        out.push_back(meta_from_json(entry));
    }
    return out;
}

void write_manifest(const std::vector<ScenarioMeta>& entries, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << manifest_to_json(entries);
}

std::vector<ScenarioMeta> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open manifest '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return manifest_from_json(buffer.str());
}

}  // namespace cotsim
