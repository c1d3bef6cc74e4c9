// cotsim command-line tool: scenario execution, corpus assembly, and
// open/closed-loop evaluation over the documented file formats.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cotsim/dataset.hpp"
#include "cotsim/frame_log.hpp"
#include "cotsim/metrics.hpp"
#include "cotsim/sim.hpp"

namespace fs = std::filesystem;
using namespace cotsim;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text(out_path, text);
    }
}

LoadedScenario load_with_config(const std::string& scenario_path, const std::string& config_path) {
    LoadedScenario scenario = load_scenario(scenario_path);
    if (!config_path.empty()) {
        load_config_file(scenario.config, config_path);
    }
    for (const std::string& warning : scenario.spec.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    return scenario;
}

ScenarioMeta run_one(const LoadedScenario& scenario, std::uint64_t seed, const fs::path& out_dir) {
    const RunResult result = run_scenario(scenario, seed);
    fs::create_directories(out_dir);
    const std::string file = scenario.spec.scenario_id + ".jsonl";
    write_run_jsonl(result, (out_dir / file).string());
    ScenarioMeta meta = make_meta(scenario.spec, result, file);
    write_text((out_dir / (scenario.spec.scenario_id + ".meta.json")).string(),
               manifest_to_json({meta}));
    return meta;
}

std::vector<ParsedFrame> read_frames_any(const std::string& path) {
    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.path().extension() == ".jsonl") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            throw std::runtime_error("no .jsonl files under '" + path + "'");
        }
        std::vector<ParsedFrame> all;
        for (const std::string& f : files) {
            auto part = read_frames_jsonl(f);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    return read_frames_jsonl(path);
}

std::string manifest_path(const std::string& corpus_dir) {
    return (fs::path(corpus_dir) / "corpus_manifest.json").string();
}

int run_command(const std::string& scenario_path, const std::string& config_path,
                std::uint64_t seed, const std::string& out_dir) {
    const LoadedScenario scenario = load_with_config(scenario_path, config_path);
    const ScenarioMeta meta = run_one(scenario, seed, out_dir.empty() ? "." : out_dir);
    std::printf("%s: %d records, %.1f/%.1f m, %s, %zu infraction kinds\n",
                meta.scenario_id.c_str(), meta.frames, meta.completed_arc, meta.total_arc,
                meta.terminated_by.c_str(), meta.infraction_counts.size());
    return 0;
}

int batch_command(const std::string& scenario_dir, const std::string& config_path,
                  std::uint64_t seed, const std::string& out_dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(scenario_dir)) {
        if (entry.path().extension() == ".toml") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw std::runtime_error("no .toml scenarios under '" + scenario_dir + "'");
    }
    std::vector<ScenarioMeta> manifest;
    for (const std::string& file : files) {
        const LoadedScenario scenario = load_with_config(file, config_path);
        manifest.push_back(run_one(scenario, seed, out_dir));
        std::printf("ran %s (%d records)\n", manifest.back().scenario_id.c_str(),
                    manifest.back().frames);
    }
    write_manifest(manifest, manifest_path(out_dir));
    std::printf("wrote %s (%zu scenarios)\n", manifest_path(out_dir).c_str(), manifest.size());
    return 0;
}

int emit_splits_command(const std::string& corpus_dir, double train, double val, double test,
                        std::uint64_t seed) {
    std::vector<ScenarioMeta> manifest = read_manifest(manifest_path(corpus_dir));
    std::vector<SplitItem> items;
    items.reserve(manifest.size());
    for (const ScenarioMeta& m : manifest) {
        items.push_back({m.scenario_id, m.scenario_type + "/" + m.dominant_decision});
    }
    const auto assignment = make_splits(items, {train, val, test}, seed);
    for (ScenarioMeta& m : manifest) {
        m.split = to_string(assignment.at(m.scenario_id));
    }
    write_manifest(manifest, manifest_path(corpus_dir));
    std::map<std::string, int> counts;
    for (const ScenarioMeta& m : manifest) {
        counts[m.split] += 1;
    }
    for (const auto& [split, count] : counts) {
        std::printf("%s: %d scenarios\n", split.c_str(), count);
    }
    return 0;
}

int stats_command(const std::string& corpus_dir, const std::string& out_path) {
    const std::vector<ScenarioMeta> manifest = read_manifest(manifest_path(corpus_dir));
    std::vector<FrameSample> samples;
    long manifest_total = 0;
    for (const ScenarioMeta& m : manifest) {
        manifest_total += m.frames;
        const auto frames = read_frames_jsonl((fs::path(corpus_dir) / m.file).string());
        if (static_cast<int>(frames.size()) != m.frames) {
            throw std::runtime_error("manifest lists " + std::to_string(m.frames) + " frames for " +
                                     m.scenario_id + " but " + m.file + " holds " +
                                     std::to_string(frames.size()));
        }
        for (const ParsedFrame& f : frames) {
            FrameSample s;
            s.split = m.split.empty() ? "unsplit" : m.split;
            s.final = speed_decision_from_string(f.final_decision);
            s.light_hazard = f.light_hazard;
            s.stop_hazard = f.stop_hazard;
            s.collision_hazard = f.collision_hazard;
            s.is_junction = f.is_junction;
            s.ahead_exists = f.has_aspects && f.ahead_decision != "AimSpeedLimit";
            s.ego_speed_kmh = f.ego_speed_kmh;
            samples.push_back(s);
        }
    }
    const CorpusStats stats = compute_stats(samples);
    if (stats.total_frames != manifest_total) {
        throw std::runtime_error("stats total " + std::to_string(stats.total_frames) +
                                 " does not reconcile with the manifest total " +
                                 std::to_string(manifest_total));
    }

    std::ostringstream out;
    out << "stats.total_frames = " << stats.total_frames << "\n";
    for (const auto& [split, decisions] : stats.decision_counts) {
        long split_total = 0;
        for (const auto& [name, count] : decisions) {
            out << "stats." << split << ".decision." << name << " = " << count << "\n";
            split_total += count;
        }
        out << "stats." << split << ".frames = " << split_total << "\n";
    }
    for (const auto& [split, aspects] : stats.aspect_counts) {
        for (const auto& [name, count] : aspects) {
            out << "stats." << split << ".aspect." << name << " = " << count << "\n";
        }
    }
    for (const auto& [split, hist] : stats.speed_histogram) {
        for (std::size_t bin = 0; bin < hist.size(); ++bin) {
            if (hist[bin] == 0) {
                continue;
            }
            out << "stats." << split << ".speed_kmh." << bin * 5 << "_" << bin * 5 + 5 << " = "
                << hist[bin] << "\n";
        }
    }
    emit(out.str(), out_path);
    return 0;
}

int eval_open_loop_command(const std::string& gt_path, const std::string& pred_path,
                           const std::string& out_path) {
    const auto gt = read_frames_any(gt_path);
    const auto pred = read_frames_any(pred_path);
    const OpenLoopReport report = evaluate_open_loop(gt, pred, SpeedTable{});
    emit(format_open_loop(report), out_path);
    return 0;
}

int eval_closed_loop_command(const std::string& results_path, const std::string& out_path) {
    std::vector<ScenarioMeta> metas;
    const fs::path p(results_path);
    if (fs::is_directory(p)) {
        if (fs::exists(p / "corpus_manifest.json")) {
            metas = read_manifest((p / "corpus_manifest.json").string());
        } else {
            std::vector<std::string> files;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.path().filename().string().ends_with(".meta.json")) {
                    files.push_back(entry.path().string());
                }
            }
            std::sort(files.begin(), files.end());
            for (const std::string& f : files) {
                const auto part = read_manifest(f);
                metas.insert(metas.end(), part.begin(), part.end());
            }
        }
    } else {
        metas = read_manifest(results_path);
    }
    if (metas.empty()) {
        throw std::runtime_error("no run results under '" + results_path + "'");
    }
    std::vector<RouteResult> routes;
    for (const ScenarioMeta& m : metas) {
        RouteResult r;
        r.id = m.scenario_id;
        r.completed_arc = m.completed_arc;
        r.total_arc = m.total_arc;
        r.infraction_counts = m.infraction_counts;
        routes.push_back(std::move(r));
    }
    const ClosedLoopScore score = closed_loop_score(routes, InfractionPenalties{});
    emit(format_closed_loop(score), out_path);
    return 0;
}

int replay_command(const std::string& log_path, bool check) {
    const auto frames = read_frames_jsonl(log_path);
    if (frames.empty()) {
        throw std::runtime_error("empty log '" + log_path + "'");
    }
    int violations = 0;
    int previous_frame = -1;
    for (const ParsedFrame& f : frames) {
        std::printf("[%s #%04d] %5.1f km/h -> %-12s target %5.1f km/h\n", f.scenario_id.c_str(),
                    f.frame, f.ego_speed_kmh, f.final_decision.c_str(), f.target_speed_kmh);
        if (check) {
            if (f.frame <= previous_frame) {
                std::fprintf(stderr, "frame %d: frame numbers must increase\n", f.frame);
                ++violations;
            }
            if (f.final_decision == "Brake" && f.target_speed_kmh != 0.0) {
                std::fprintf(stderr, "frame %d: Brake requires a zero target\n", f.frame);
                ++violations;
            }
            if (f.final_decision == "CautiousTurn" && f.target_speed_kmh > 30.0) {
                std::fprintf(stderr, "frame %d: CautiousTurn target above 30 km/h\n", f.frame);
                ++violations;
            }
            if (f.has_waypoints && f.waypoints.size() != 10) {
                std::fprintf(stderr, "frame %d: expected 10 waypoints\n", f.frame);
                ++violations;
            }
        }
        previous_frame = f.frame;
    }
    if (check && violations > 0) {
        std::fprintf(stderr, "%d invariant violations\n", violations);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-loop driving expert simulator, dataset emitter, and benchmark evaluator"};
    app.require_subcommand(1);

    std::string scenario_path, config_path, out_dir, corpus_dir, gt_path, pred_path, results_path,
        log_path, out_path;
    std::uint64_t seed = 0;
    double ratio_train = 0.70, ratio_val = 0.15, ratio_test = 0.15;
    bool check = false;

    auto* run = app.add_subcommand("run", "run one scenario and write its 2 Hz log");
    run->add_option("--scenario", scenario_path, "scenario .toml file")->required();
    run->add_option("--config", config_path, "expert config overrides (.toml)");
    run->add_option("--seed", seed, "seed for reason-template selection");
    run->add_option("--out", out_dir, "output directory (default: .)");

    auto* batch = app.add_subcommand("batch", "run every scenario in a directory");
    batch->add_option("--scenarios", corpus_dir, "directory of scenario .toml files")->required();
    batch->add_option("--config", config_path, "expert config overrides (.toml)");
    batch->add_option("--seed", seed, "seed for reason-template selection");
    batch->add_option("--out", out_dir, "output corpus directory")->required();

    auto* splits = app.add_subcommand("emit-splits", "assign train/val/test splits in a manifest");
    splits->add_option("--corpus", corpus_dir, "corpus directory with corpus_manifest.json")
        ->required();
    splits->add_option("--train", ratio_train, "train ratio (default 0.70)");
    splits->add_option("--val", ratio_val, "val ratio (default 0.15)");
    splits->add_option("--test", ratio_test, "test ratio (default 0.15)");
    splits->add_option("--seed", seed, "assignment seed");

    auto* stats = app.add_subcommand("stats", "corpus label and speed distributions");
    stats->add_option("--corpus", corpus_dir, "corpus directory")->required();
    stats->add_option("--out", out_path, "write the report here instead of stdout");

    auto* open_loop = app.add_subcommand("eval-open-loop", "per-class F1 and path-angle accuracy");
    open_loop->add_option("--gt", gt_path, "ground-truth .jsonl file or directory")->required();
    open_loop->add_option("--pred", pred_path, "prediction .jsonl file or directory")->required();
    open_loop->add_option("--out", out_path, "write the report here instead of stdout");

    auto* closed_loop = app.add_subcommand("eval-closed-loop", "driving score / route completion / infraction score");
    closed_loop->add_option("--results", results_path, "manifest, meta file, or results directory")
        ->required();
    closed_loop->add_option("--out", out_path, "write the report here instead of stdout");

    auto* replay = app.add_subcommand("replay", "print a logged run frame by frame");
    replay->add_option("--log", log_path, "run .jsonl log")->required();
    replay->add_flag("--check", check, "validate record invariants");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(scenario_path, config_path, seed, out_dir);
        }
        if (batch->parsed()) {
            return batch_command(corpus_dir, config_path, seed, out_dir);
        }
        if (splits->parsed()) {
            return emit_splits_command(corpus_dir, ratio_train, ratio_val, ratio_test, seed);
        }
        if (stats->parsed()) {
            return stats_command(corpus_dir, out_path);
        }
        if (open_loop->parsed()) {
            return eval_open_loop_command(gt_path, pred_path, out_path);
        }
        if (closed_loop->parsed()) {
            return eval_closed_loop_command(results_path, out_path);
        }
        if (replay->parsed()) {
            return replay_command(log_path, check);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
