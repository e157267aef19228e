#include "config.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace ssdgc::cli {

namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    return parse(in, path);
}

ConfigFile ConfigFile::parse(std::istream& in, const std::string& name) {
    ConfigFile cfg;
    cfg.name_ = name;
    std::string line, section;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(name + ":" + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(name + ":" + std::to_string(line_no) + ": empty key");
        cfg.values_[section + "." + key] = value;
    }
    return cfg;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    try {
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + section + "." + key + " is not a number: '" +
                                    it->second + "'");
    }
}

uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                             uint64_t fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    try {
        size_t used = 0;
        const uint64_t v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + section + "." + key +
                                    " is not an integer: '" + it->second + "'");
    }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw std::invalid_argument("config: " + section + "." + key + " is not a boolean");
}

GcPolicy parse_policy(const std::string& text) {
    if (text == "greedy") return {GcKind::Greedy, 1.0};
    if (text == "random") return {GcKind::Random, 1.0};
    if (text.rfind("rga:", 0) == 0) {
        const double d = std::stod(text.substr(4));
        if (!(d >= 1.0)) throw std::invalid_argument("policy: rga window must be >= 1");
        return {GcKind::Rga, d};
    }
    if (text == "rga") return {GcKind::Rga, 2.0};
    throw std::invalid_argument("policy: expected greedy, random, or rga:<d>, got '" + text +
                                "'");
}

ExperimentConfig experiment_defaults() {
    ExperimentConfig exp;
    // Desk-scale validation geometry; full-size devices go in the config.
    exp.sim.geometry.blocks_per_package = 1280;
    exp.sim.geometry.pages_per_block = 16;
    exp.sim.geometry.page_size = 4096;
    exp.sim.geometry.packages = 1;
    exp.sim.geometry.over_provisioning = 0.15;
    exp.sim.geometry.gc_threshold = 0.05;
    exp.sim.policy = {GcKind::Greedy, 1.0};
    exp.sim.initial = InitialState::Full;
    exp.sim.seed = 1;
    exp.workload.spec.pattern = AccessPattern::Random;
    exp.workload.spec.arrival = ArrivalProcess::Poisson;
    exp.workload.spec.mean_interarrival_ms = 100.0;
    exp.workload.spec.write_ratio = 1.0;
    exp.workload.spec.request_count = 2'000'000;
    exp.workload.spec.request_bytes = 4096;
    return exp;
}

ExperimentConfig load_experiment(const std::string& path) {
    const ConfigFile cfg = ConfigFile::load(path);
    ExperimentConfig exp = experiment_defaults();

    SsdGeometry& g = exp.sim.geometry;
    g.blocks_per_package =
        static_cast<uint32_t>(cfg.get_u64("geometry", "blocks_per_package", g.blocks_per_package));
    g.pages_per_block =
        static_cast<uint32_t>(cfg.get_u64("geometry", "pages_per_block", g.pages_per_block));
    g.page_size = static_cast<uint32_t>(cfg.get_u64("geometry", "page_size", g.page_size));
    g.packages = static_cast<uint32_t>(cfg.get_u64("geometry", "packages", g.packages));
    g.over_provisioning = cfg.get_double("geometry", "over_provisioning", g.over_provisioning);
    g.gc_threshold = cfg.get_double("geometry", "gc_threshold", g.gc_threshold);

    TimingModel& t = exp.sim.timing;
    t.read_page_ms = cfg.get_double("timing", "read_page_ms", t.read_page_ms);
    t.write_page_ms = cfg.get_double("timing", "write_page_ms", t.write_page_ms);
    t.erase_block_ms = cfg.get_double("timing", "erase_block_ms", t.erase_block_ms);
    t.transfer_per_byte_ms =
        cfg.get_double("timing", "transfer_per_byte_ms", t.transfer_per_byte_ms);

    std::string policy_text = cfg.get("policy", "kind", "greedy");
    if (policy_text == "rga" && cfg.has("policy", "window"))
        policy_text += ":" + cfg.get("policy", "window", "");
    exp.sim.policy = parse_policy(policy_text);
    if (cfg.has("policies", "list")) {
        std::istringstream list(cfg.get("policies", "list", ""));
        std::string item;
        while (std::getline(list, item, ',')) {
            const size_t start = item.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
            const size_t stop = item.find_last_not_of(" \t");
            exp.policies.push_back(parse_policy(item.substr(start, stop - start + 1)));
        }
    }

    const std::string initial = cfg.get("experiment", "initial_state", "full");
    if (initial == "full")
        exp.sim.initial = InitialState::Full;
    else if (initial == "empty")
        exp.sim.initial = InitialState::Empty;
    else
        throw std::invalid_argument("config: experiment.initial_state must be empty or full");
    exp.sim.seed = cfg.get_u64("experiment", "seed", exp.sim.seed);
    exp.sim.erase_limit =
        static_cast<uint32_t>(cfg.get_u64("experiment", "erase_limit", exp.sim.erase_limit));
    exp.sim.bad_block_budget =
        cfg.get_double("experiment", "bad_block_budget", exp.sim.bad_block_budget);
    exp.sim.snapshot_every = cfg.get_u64("experiment", "snapshot_every", 0);
    exp.max_requests = cfg.get_u64("experiment", "max_requests", exp.max_requests);

    WorkloadConfig& w = exp.workload;
    w.source = cfg.get("workload", "source", w.source);
    const std::string pattern = cfg.get("workload", "pattern", "random");
    if (pattern == "random")
        w.spec.pattern = AccessPattern::Random;
    else if (pattern == "sequential")
        w.spec.pattern = AccessPattern::Sequential;
    else if (pattern == "hybrid")
        w.spec.pattern = AccessPattern::Hybrid;
    else
        throw std::invalid_argument("config: workload.pattern must be random, sequential, "
                                    "or hybrid");
    const std::string arrival = cfg.get("workload", "arrival", "poisson");
    if (arrival == "poisson")
        w.spec.arrival = ArrivalProcess::Poisson;
    else if (arrival == "normal")
        w.spec.arrival = ArrivalProcess::Normal;
    else
        throw std::invalid_argument("config: workload.arrival must be poisson or normal");
    w.spec.mean_interarrival_ms =
        cfg.get_double("workload", "mean_interarrival_ms", w.spec.mean_interarrival_ms);
    w.spec.stddev_interarrival_ms =
        cfg.get_double("workload", "stddev_interarrival_ms", w.spec.stddev_interarrival_ms);
    w.spec.write_ratio = cfg.get_double("workload", "write_ratio", w.spec.write_ratio);
    w.spec.request_count = cfg.get_u64("workload", "requests", w.spec.request_count);
    w.spec.request_bytes =
        static_cast<uint32_t>(cfg.get_u64("workload", "request_bytes", w.spec.request_bytes));
    w.spec.hot_fraction = cfg.get_double("workload", "hot_fraction", w.spec.hot_fraction);
    w.spec.hot_write_probability =
        cfg.get_double("workload", "hot_write_probability", w.spec.hot_write_probability);
    w.spec.seed = cfg.get_u64("workload", "seed", exp.sim.seed);
    w.prefill = cfg.get_bool("workload", "prefill", w.prefill);
    w.fill_fraction = cfg.get_double("workload", "fill_fraction", w.fill_fraction);
    w.trace_path = cfg.get("workload", "trace_path", "");
    const std::string fmt = cfg.get("workload", "trace_format", "spc1");
    if (fmt == "spc1")
        w.trace_format = TraceFormat::Spc1;
    else if (fmt == "csv")
        w.trace_format = TraceFormat::Csv;
    else
        throw std::invalid_argument("config: workload.trace_format must be spc1 or csv");
    w.replay_cycles = cfg.get_u64("workload", "replay_cycles", 1);
    w.replay_target = cfg.get_u64("workload", "replay_target", 0);

    ModelConfig& m = exp.model;
    m.source = cfg.get("model", "source", m.source);
    m.k = static_cast<int>(cfg.get_u64("model", "k", m.k));
    m.lambda = cfg.get_double("model", "lambda", m.lambda);
    m.file = cfg.get("model", "file", "");

    TradeoffConfig& td = exp.tradeoff;
    td.pi = cfg.get("tradeoff", "pi", td.pi);
    td.curve_points = static_cast<int>(cfg.get_u64("tradeoff", "curve_points", td.curve_points));
    td.d_min = static_cast<int>(cfg.get_u64("tradeoff", "d_min", td.d_min));
    td.d_max = static_cast<int>(cfg.get_u64("tradeoff", "d_max", td.d_max));
    td.d_grid_start = cfg.get_double("tradeoff", "d_grid_start", td.d_grid_start);
    td.d_grid_stop = cfg.get_double("tradeoff", "d_grid_stop", td.d_grid_stop);
    td.d_grid_step = cfg.get_double("tradeoff", "d_grid_step", td.d_grid_step);

    return exp;
}

}  // namespace ssdgc::cli
