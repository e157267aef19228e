// Command-line front end: model fixed points, model-vs-simulation
// validation, optimal tradeoff curves, RGA sweeps, trace/synthetic
// simulation, and durability runs. All outputs are CSV files under --out.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "ssdgc/analysis.hpp"
#include "ssdgc/errors.hpp"
#include "ssdgc/meanfield.hpp"
#include "ssdgc/model.hpp"
#include "ssdgc/sim.hpp"
#include "ssdgc/workload.hpp"

namespace fs = std::filesystem;
using namespace ssdgc;
using cli::ExperimentConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitExperiment = 1;
constexpr int kExitConfig = 2;

std::ofstream open_out(const ExperimentConfig& exp, const std::string& name) {
    fs::create_directories(exp.out_dir);
    const fs::path path = fs::path(exp.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

TransitionModel load_model(const cli::ModelConfig& model) {
    if (model.source == "uniform") return uniform_transition_model(model.k, model.lambda);
    if (model.source != "file")
        throw std::invalid_argument("model.source must be uniform or file");
    std::ifstream in(model.file);
    if (!in) throw std::invalid_argument("cannot open model file " + model.file);
    std::string line;
    if (!std::getline(in, line) || line != "state,up,down")
        throw std::invalid_argument("model file must start with header state,up,down");
    TransitionModel m;
    m.lambda = model.lambda;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        std::getline(row, field, ',');
        m.up.push_back(std::stod(field));
        std::getline(row, field, ',');
        m.down.push_back(std::stod(field));
    }
    m.validate();
    return m;
}

OccupancyVector tradeoff_pi(const ExperimentConfig& exp) {
    const cli::TradeoffConfig& td = exp.tradeoff;
    if (td.pi == "binomial") return binomial_fixed_point(exp.model.k);
    if (td.pi == "model") return general_fixed_point(load_model(exp.model));
    if (td.pi.rfind("normal:", 0) == 0) {
        const size_t second = td.pi.find(':', 7);
        if (second == std::string::npos)
            throw std::invalid_argument("tradeoff.pi normal form is normal:<mu>:<sigma>");
        const double mu = std::stod(td.pi.substr(7, second - 7));
        const double sigma = std::stod(td.pi.substr(second + 1));
        OccupancyVector pi;
        pi.p.resize(exp.model.k + 1);
        double sum = 0.0;
        for (int i = 0; i <= exp.model.k; ++i) {
            const double x = (i - mu) / sigma;
            pi.p[i] = std::exp(-0.5 * x * x);
            sum += pi.p[i];
        }
        for (double& v : pi.p) v /= sum;
        return pi;
    }
    throw std::invalid_argument("tradeoff.pi must be binomial, model, or normal:<mu>:<sigma>");
}

std::vector<IoRequest> build_stream(const ExperimentConfig& exp) {
    const cli::WorkloadConfig& w = exp.workload;
    const uint32_t page_size = exp.sim.geometry.page_size;
    std::vector<IoRequest> base;
    if (w.source == "synthetic") {
        base = generate_synthetic(w.spec, exp.sim.geometry.logical_pages_total(), page_size);
    } else if (w.source == "trace") {
        std::ifstream in(w.trace_path);
        if (!in) throw std::invalid_argument("cannot open trace " + w.trace_path);
        const uint64_t logical_sectors =
            exp.sim.geometry.logical_pages_total() * (page_size / 512);
        TraceParseResult parsed = parse_trace(in, w.trace_format, logical_sectors);
        for (const std::string& diag : parsed.diagnostics)
            std::cerr << "trace: " << diag << "\n";
        std::cerr << "trace: " << parsed.requests.size() << " requests, "
                  << parsed.out_of_range << " beyond the logical space\n";
        base = std::move(parsed.requests);
    } else {
        throw std::invalid_argument("workload.source must be synthetic or trace");
    }
    if (w.source == "trace" && base.size() > 1) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.4f", sequential_ratio(base));
        std::cerr << "trace: sequential ratio " << buf << " (pre-alignment)\n";
    }
    std::vector<IoRequest> aligned = align_to_pages(base, page_size);
    if (w.replay_cycles > 1 || w.replay_target > 0)
        return replay(aligned, std::max<uint64_t>(1, w.replay_cycles), w.replay_target);
    return aligned;
}

std::vector<GcPolicy> comparison_policies(const ExperimentConfig& exp) {
    if (!exp.policies.empty()) return exp.policies;
    return {exp.sim.policy};
}

int cmd_fixed_point(const ExperimentConfig& exp) {
    const TransitionModel model = load_model(exp.model);
    const OccupancyVector closed = general_fixed_point(model);
    OccupancyVector s0;
    s0.p.assign(model.up.size(), 1.0 / static_cast<double>(model.up.size()));
    const IntegrationResult ode =
        integrate_to_steady_state(s0, model, default_ode_config(model));

    std::ofstream out = open_out(exp, "fixed_point.csv");
    out << "state,closed_form,ode\n";
    double l1 = 0.0;
    for (size_t i = 0; i < closed.p.size(); ++i) {
        out << i << ',' << fmt(closed.p[i]) << ',' << fmt(ode.steady.p[i]) << "\n";
        l1 += std::abs(closed.p[i] - ode.steady.p[i]);
    }
    std::ofstream traj = open_out(exp, "trajectory.csv");
    write_trajectory_csv(traj, ode.trajectory);
    std::cout << "fixed-point: k=" << model.k() << " L1(closed,ode)=" << fmt(l1)
              << " steps=" << ode.steps << "\n";
    return kExitOk;
}

int cmd_validate(const ExperimentConfig& exp) {
    const int k = static_cast<int>(exp.sim.geometry.pages_per_block);
    TransitionEstimator estimator(k);
    SsdSimulator sim(exp.sim);
    sim.attach_observer(&estimator);
    for (const IoRequest& req : build_stream(exp)) sim.apply_request(req);

    const OccupancyVector simulated = sim.mean_occupancy();
    const std::vector<bool> missing = estimator.unobserved_states();
    for (int i = 0; i <= k; ++i)
        if (missing[i])
            std::cerr << "validate: state " << i << " never populated; model is degenerate\n";
    const OccupancyVector model = general_fixed_point(estimator.estimate());

    std::ofstream out = open_out(exp, "validate.csv");
    out << "state,simulated,model\n";
    double l1 = 0.0;
    for (int i = 0; i <= k; ++i) {
        out << i << ',' << fmt(simulated.p[i]) << ',' << fmt(model.p[i]) << "\n";
        l1 += std::abs(simulated.p[i] - model.p[i]);
    }
    std::cout << "validate: requests=" << estimator.requests() << " L1=" << fmt(l1) << "\n";
    return kExitOk;
}

int cmd_tradeoff(const ExperimentConfig& exp) {
    const OccupancyVector pi = tradeoff_pi(exp);
    const int k = pi.k();
    std::vector<double> grid;
    grid.push_back(0.0);
    for (int i = 1; i < exp.tradeoff.curve_points - 1; ++i)
        grid.push_back(static_cast<double>(k) * i /
                       static_cast<double>(exp.tradeoff.curve_points - 1));
    grid.push_back(static_cast<double>(k));
    grid.push_back(pi.mean_valid());
    std::sort(grid.begin(), grid.end());

    const std::vector<KktSolution> curve = tradeoff_curve(pi, grid);
    std::ofstream curve_out = open_out(exp, "curve.csv");
    write_curve_csv(curve_out, curve);

    std::ofstream rga_out = open_out(exp, "rga_points.csv");
    rga_out << "d,cost,wear,w_star,on_curve\n";
    uint64_t violations = 0;
    auto emit = [&](double d) {
        const TradeoffPoint pt = rga_point(pi, d);
        const KktSolution best = optimal_wear_leveling(pi, pt.cost);
        const bool ok = pt.wear <= best.wear + 1e-9;
        violations += ok ? 0 : 1;
        rga_out << fmt(d) << ',' << fmt(pt.cost) << ',' << fmt(pt.wear) << ','
                << fmt(best.wear) << ',' << (ok ? 1 : 0) << "\n";
    };
    for (int d = exp.tradeoff.d_min; d <= exp.tradeoff.d_max; ++d) emit(d);
    for (double d = exp.tradeoff.d_grid_start; d <= exp.tradeoff.d_grid_stop + 1e-12;
         d += exp.tradeoff.d_grid_step)
        emit(d);

    std::cout << "tradeoff: k=" << k << " curve_points=" << curve.size()
              << " rga_violations=" << violations << "\n";
    return violations == 0 ? kExitOk : kExitExperiment;
}

int cmd_rga_sweep(const ExperimentConfig& exp) {
    const OccupancyVector pi = tradeoff_pi(exp);
    std::vector<std::pair<double, TradeoffPoint>> sweep;
    for (int d = exp.tradeoff.d_min; d <= exp.tradeoff.d_max; ++d)
        sweep.emplace_back(d, rga_point(pi, static_cast<double>(d)));
    for (double d = exp.tradeoff.d_grid_start; d <= exp.tradeoff.d_grid_stop + 1e-12;
         d += exp.tradeoff.d_grid_step)
        sweep.emplace_back(d, rga_point(pi, d));
    std::ofstream out = open_out(exp, "rga_sweep.csv");
    write_rga_sweep_csv(out, sweep);
    std::cout << "rga-sweep: " << sweep.size() << " points\n";
    return kExitOk;
}

int cmd_simulate(const ExperimentConfig& exp) {
    const std::vector<IoRequest> stream = build_stream(exp);
    std::vector<std::string> labels;
    std::vector<SimReport> reports;
    std::string abort_reason;
    for (const GcPolicy& policy : comparison_policies(exp)) {
        SimConfig cfg = exp.sim;
        cfg.policy = policy;
        try {
            reports.push_back(simulate(stream, cfg));
        } catch (const std::runtime_error& e) {
            // Keep whatever completed; the dump travels with the message.
            abort_reason = e.what();
            break;
        }
        labels.push_back(policy.label());
        write_report_summary(std::cout, labels.back(), reports.back());
        if (cfg.snapshot_every > 0) {
            std::ofstream snap = open_out(exp, "snapshots_" + labels.back() + ".csv");
            write_snapshots_csv(snap, reports.back().snapshots);
        }
    }
    if (reports.size() > labels.size()) reports.pop_back();
    std::ofstream out = open_out(exp, "simulate.csv");
    write_report_csv(out, labels, reports);
    if (!abort_reason.empty()) {
        std::cerr << "simulate aborted, partial results kept: " << abort_reason << "\n";
        return kExitExperiment;
    }
    return kExitOk;
}

int cmd_durability(const ExperimentConfig& exp) {
    if (exp.sim.erase_limit == 0 || exp.sim.bad_block_budget <= 0.0)
        throw std::invalid_argument(
            "durability needs experiment.erase_limit and experiment.bad_block_budget");

    std::vector<GcPolicy> policies = comparison_policies(exp);
    // The greedy baseline anchors the normalized lifetimes.
    bool have_greedy = false;
    for (const GcPolicy& p : policies) have_greedy = have_greedy || p.kind == GcKind::Greedy;
    if (!have_greedy) policies.insert(policies.begin(), {GcKind::Greedy, 1.0});

    const uint64_t logical = exp.sim.geometry.logical_pages_total();
    std::vector<std::string> labels;
    std::vector<SimReport> reports;
    double greedy_lifetime = 0.0;
    std::string abort_reason;
    for (const GcPolicy& policy : policies) {
        SimConfig cfg = exp.sim;
        cfg.policy = policy;
        cfg.initial = InitialState::Empty;
        DurabilityResult result;
        try {
            if (exp.workload.prefill) {
                FillThenChurnStream stream(exp.workload.spec, logical, cfg.geometry.page_size,
                                           exp.workload.fill_fraction);
                result = run_durability(stream, cfg, exp.max_requests);
            } else {
                SyntheticStream stream(exp.workload.spec, logical, cfg.geometry.page_size);
                result = run_durability(stream, cfg, exp.max_requests);
            }
        } catch (const std::runtime_error& e) {
            abort_reason = e.what();
            break;
        }
        if (policy.kind == GcKind::Greedy && greedy_lifetime == 0.0)
            greedy_lifetime = result.lifetime_ms;
        labels.push_back(policy.label());
        reports.push_back(result.report);
        write_report_summary(std::cout, labels.back(), reports.back());
    }

    std::ofstream out = open_out(exp, "durability.csv");
    out << "policy,lifetime_ms,normalized_vs_greedy,retired_blocks,total_erases,"
           "served_requests\n";
    for (size_t i = 0; i < reports.size(); ++i) {
        const SimReport& r = reports[i];
        out << labels[i] << ',' << fmt(r.lifetime_ms) << ','
            << fmt(greedy_lifetime > 0.0 ? r.lifetime_ms / greedy_lifetime : 0.0) << ','
            << r.retired_blocks << ',' << r.total_erases << ',' << r.served_requests << "\n";
    }
    if (!abort_reason.empty()) {
        std::cerr << "durability aborted, partial results kept: " << abort_reason << "\n";
        return kExitExperiment;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SSD garbage-collection modeling and simulation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    uint64_t seed_override = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "output directory (default from config, else .)");
    app.add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });

    auto* fixed_point = app.add_subcommand("fixed-point", "closed-form vs ODE steady state");
    auto* validate = app.add_subcommand("validate", "simulated occupancy vs estimated model");
    auto* tradeoff = app.add_subcommand("tradeoff", "optimal curve with RGA overlay");
    auto* rga_sweep = app.add_subcommand("rga-sweep", "RGA operating points over d");
    auto* simulate_cmd = app.add_subcommand("simulate", "policy comparison on one workload");
    auto* durability = app.add_subcommand("durability", "lifetime until the bad-block budget");
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig exp = cli::load_experiment(config_path);
        if (!out_dir.empty()) exp.out_dir = out_dir;
        if (seed_set) {
            exp.sim.seed = seed_override;
            exp.workload.spec.seed = seed_override;
        }
        exp.sim.validate();
        exp.workload.spec.validate();

        try {
            if (fixed_point->parsed()) return cmd_fixed_point(exp);
            if (validate->parsed()) return cmd_validate(exp);
            if (tradeoff->parsed()) return cmd_tradeoff(exp);
            if (rga_sweep->parsed()) return cmd_rga_sweep(exp);
            if (simulate_cmd->parsed()) return cmd_simulate(exp);
            if (durability->parsed()) return cmd_durability(exp);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitConfig;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitExperiment;
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
