#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssdgc/sim.hpp"
#include "ssdgc/workload.hpp"

namespace ssdgc::cli {

/// Section/key view of a declarative config file. Lines are `key = value`
/// under `[section]` headers; `#` and `;` start comments.
class ConfigFile {
public:
    static ConfigFile load(const std::string& path);
    static ConfigFile parse(std::istream& in, const std::string& name);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    uint64_t get_u64(const std::string& section, const std::string& key,
                     uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

private:
    std::map<std::string, std::string> values_;  // "section.key" -> value
    std::string name_;
};

struct WorkloadConfig {
    std::string source = "synthetic";  // synthetic | trace
    SyntheticSpec spec;
    bool prefill = false;
    double fill_fraction = 1.0;  // footprint written by the prefill phase
    std::string trace_path;
    TraceFormat trace_format = TraceFormat::Spc1;
    uint64_t replay_cycles = 1;
    uint64_t replay_target = 0;
};

struct ModelConfig {
    std::string source = "uniform";  // uniform | file
    int k = 16;
    double lambda = 1.0;
    std::string file;
};

struct TradeoffConfig {
    std::string pi = "binomial";  // binomial | normal:<mu>:<sigma>
    int curve_points = 25;
    int d_min = 1;
    int d_max = 100;
    double d_grid_start = 1.0;
    double d_grid_stop = 2.0;
    double d_grid_step = 0.05;
};

struct ExperimentConfig {
    SimConfig sim;                  // geometry, timing, policy, seed, initial state
    std::vector<GcPolicy> policies; // comparison set; falls back to sim.policy
    WorkloadConfig workload;
    ModelConfig model;
    TradeoffConfig tradeoff;
    uint64_t max_requests = 200'000'000;  // durability request budget
    std::string out_dir = ".";
};

/// Builds the experiment configuration from a config file, applying the
/// shipped defaults for anything not present. Throws std::invalid_argument
/// on unparseable values.
ExperimentConfig load_experiment(const std::string& path);
ExperimentConfig experiment_defaults();

GcPolicy parse_policy(const std::string& text);

}  // namespace ssdgc::cli
