#pragma once

#include <stdexcept>
#include <string>

#include "cotsim/config.hpp"
#include "cotsim/world.hpp"

namespace cotsim {

/// A scenario that parses but violates a documented invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario together with its resolved expert configuration (defaults plus
/// any `[config]` overrides the file carried, kept for re-serialization).
struct LoadedScenario {
    ScenarioSpec spec;
    ExpertConfig config;
    std::vector<std::pair<std::string, std::string>> config_overrides;  // dotted key -> canonical value
};

/// Parses and validates a scenario file. Throws toml::ParseError with line
/// diagnostics or ValidationError naming the violated invariant.
LoadedScenario load_scenario(const std::string& path);

/// Same, from an in-memory document (diagnostics reference `name`).
LoadedScenario load_scenario_string(const std::string& text, const std::string& name = "<string>");

/// Canonical serialization: fixed key order, shortest round-trip numbers.
/// Reloading the output yields a structurally equal scenario, and
/// re-serializing it reproduces the bytes.
std::string save_scenario(const LoadedScenario& scenario);

/// Equality of canonical forms (load-time warnings are not part of it).
bool structurally_equal(const LoadedScenario& a, const LoadedScenario& b);

}  // namespace cotsim
