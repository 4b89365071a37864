#pragma once

#include <map>
#include <string>
#include <vector>

#include "tlab/duality.hpp"
#include "tlab/generators.hpp"
#include "tlab/serialize.hpp"

namespace tlab {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Flat key-value scenario description. Accepted encodings: commented
/// `key = value` text, or a flat JSON object with the same keys.
struct ScenarioConfig {
    std::string command;
    std::map<std::string, std::string> entries;
    std::string source_path;

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_real(const std::string& key, double fallback) const;
    double require_real(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("seed", 1)); }
    std::string output_dir() const { return get_string("output_dir", "out"); }

    void validate_config() const; // command known, tolerances positive, files exist
};

ScenarioConfig parse_config_text(const std::string& text, const std::string& source);
ScenarioConfig parse_config(const std::string& path);

/// Stable FNV-1a hash of the canonical (sorted key=value) form.
std::string config_hash(const ScenarioConfig& cfg);

struct ScenarioReport {
    std::string command;
    std::map<std::string, std::string> config_echo;
    std::string hash;
    std::map<std::string, double> metrics;
    std::map<std::string, std::string> verdicts; // pass | fail | low-confidence
    std::vector<std::string> notes;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
    std::string version = kArtifactVersion;

    bool all_pass() const;
};

struct RunOptions {
    int jobs = 1;
    std::string out_override; // overrides output_dir when nonempty
};

/// Dispatches to the owning module, writes report.json plus CSV tables into
/// the output directory, deterministic given the seed.
ScenarioReport run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Re-runs the embedded config and asserts metric equality within 1e-12.
ScenarioReport replay_report(const std::string& report_path, const RunOptions& opts = {});

std::string report_to_json(const ScenarioReport& report);
void save_report(const ScenarioReport& report, const std::string& path);

/// Byte-deterministic numeric formatting used by every CSV writer (%.17g).
std::string format_real(double v);

} // namespace tlab
