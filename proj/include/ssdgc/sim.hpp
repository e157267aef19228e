#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <deque>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssdgc/errors.hpp"
#include "ssdgc/meanfield.hpp"
#include "ssdgc/model.hpp"
#include "ssdgc/workload.hpp"

namespace ssdgc {

enum class PageState : uint8_t { Clean, Valid, Invalid };

/// Flash operation latencies in milliseconds; defaults match a common SLC part.
struct TimingModel {
    double read_page_ms = 0.025;
    double write_page_ms = 0.2;
    double erase_block_ms = 1.5;
    double transfer_per_byte_ms = 0.000025;

    void validate() const;
};

enum class GcKind { Greedy, Random, Rga };

struct GcPolicy {
    GcKind kind = GcKind::Greedy;
    double window = 1.0;  // Rga only; real-valued, >= 1

    void validate() const;
    std::string label() const;  // "greedy" | "random" | "rga:<d>"
};

enum class InitialState { Empty, Full };

struct SimConfig {
    SsdGeometry geometry;
    TimingModel timing;
    GcPolicy policy;
    InitialState initial = InitialState::Full;
    uint64_t seed = 1;
    uint32_t erase_limit = 0;       // 0 = blocks never wear out
    double bad_block_budget = 0.0;  // fraction of blocks allowed to retire
    uint64_t snapshot_every = 0;    // requests between occupancy snapshots

    void validate() const;
};

struct OccupancySnapshot {
    double t_ms;
    std::vector<uint32_t> counts;  // n_0..n_k across packages
};

struct SimReport {
    uint64_t served_requests = 0;
    uint64_t rejected_requests = 0;
    uint64_t page_reads = 0;
    uint64_t page_writes = 0;  // host programs, excluding GC relocation
    uint64_t gc_operations = 0;
    uint64_t relocated_pages = 0;
    uint64_t total_erases = 0;
    uint64_t retired_blocks = 0;
    double cleaning_cost = 0.0;   // relocated_pages / gc_operations
    double wear_leveling = 0.0;   // fairness index over per-block erase counts
    double iops = 0.0;            // served requests / simulated span
    double mean_latency_ms = 0.0;
    double span_ms = 0.0;         // first arrival to last completion
    double mean_window = 0.0;     // average sampled window size, Rga only
    double lifetime_ms = 0.0;     // durability runs: time of the budget-filling retirement
    std::vector<uint32_t> occupancy;      // end-of-run histogram over block types
    std::vector<double> occupancy_mean;   // per-request average of the normalized histogram
    std::vector<OccupancySnapshot> snapshots;
};

/// Jain fairness index (sum c)^2 / (n * sum c^2) over per-block erase
/// counts. Throws std::invalid_argument when every count is zero.
double empirical_wear_leveling(std::span<const uint32_t> erase_counts);

/// Page-level SSD with per-package write frontiers, FCFS service, and
/// pluggable GC victim selection. One instance is single-threaded and owns
/// its state; run instances concurrently if needed, they share nothing.
class SsdSimulator {
public:
    explicit SsdSimulator(const SimConfig& config);

    /// Transition evidence (host program/invalidate events only) is fed to
    /// the observer. Attach before applying requests.
    void attach_observer(TransitionObserver* observer);

    /// Process one request through queueing, page state changes, and any GC
    /// it triggers. Returns the request latency in ms, or a negative value
    /// if the request was rejected (out of logical range).
    double apply_request(const IoRequest& request);

    /// Victim block id under the configured policy (package-local).
    /// Consumes randomness for the sampling policies.
    uint32_t select_victim(uint32_t package);

    /// One GC operation: select, relocate, erase. Returns relocated pages.
    uint32_t run_gc(uint32_t package, double& service_ms);

    SimReport report() const;

    bool worn_out() const { return wearout_hit_; }
    uint64_t retired_blocks() const { return retired_; }

    // State introspection, mostly for tests and validation runs.
    std::vector<uint32_t> occupancy_counts() const;   // aggregated histogram
    OccupancyVector occupancy_measure() const;        // normalized histogram
    /// Running per-request average of the normalized histogram; steadier
    /// than a single end-of-run snapshot at small block counts.
    OccupancyVector mean_occupancy() const;
    std::vector<uint32_t> erase_counts() const;       // all blocks, all packages
    uint64_t free_blocks(uint32_t package) const;
    uint64_t eligible_blocks(uint32_t package) const;
    uint32_t block_valid_count(uint32_t package, uint32_t block) const;
    PageState page_state(uint32_t package, uint32_t block, uint32_t page) const;
    uint64_t page_state_total(PageState state) const;
    /// Checks map/reverse-map bijectivity and per-block valid counts;
    /// throws std::logic_error on violation.
    void check_consistency() const;

    /// Versioned text snapshot of counters and pools, written on aborts.
    std::string state_dump() const;

private:
    struct Block {
        uint32_t valid = 0;
        uint32_t fill = 0;  // next clean page offset while this is the frontier
        uint32_t erases = 0;
        enum class Status : uint8_t { Free, Frontier, InUse, Retired } status = Status::Free;
        uint32_t eligible_pos = UINT32_MAX;
    };

    struct Package {
        std::vector<PageState> pages;
        std::vector<uint32_t> reverse_lpn;  // phys page -> package-local lpn
        std::vector<uint32_t> map;          // package-local lpn -> phys page
        std::vector<Block> blocks;
        std::deque<uint32_t> free_list;  // FIFO so every block rotates through the frontier
        std::vector<uint32_t> eligible;
        // (valid, id) pairs of eligible blocks; begin() is the greedy victim.
        std::set<std::pair<uint32_t, uint32_t>> by_valid;
        std::vector<uint32_t> hist;  // block-type counts 0..k
        uint32_t active_blocks = 0;
        uint32_t frontier = UINT32_MAX;
        double busy_until_ms = 0.0;
        std::mt19937_64 rng;
    };

    void init_package(Package& pkg, uint64_t mapped_pages);
    void make_eligible(Package& pkg, uint32_t block);
    void drop_eligible(Package& pkg, uint32_t block);
    void change_valid(Package& pkg, uint32_t block, int delta);
    uint32_t acquire_frontier(Package& pkg);
    uint32_t program_page(Package& pkg, uint32_t local_lpn);
    void invalidate_page(Package& pkg, uint32_t phys);
    void erase_block(Package& pkg, uint32_t block);
    void collect_if_needed(Package& pkg, double& service_ms);
    double page_service_ms(IoOp op) const;

    SimConfig config_;
    std::vector<Package> packages_;
    uint64_t logical_pages_;  // per package
    uint32_t pages_per_block_;

    TransitionObserver* observer_ = nullptr;

    uint64_t served_ = 0;
    uint64_t rejected_ = 0;
    uint64_t page_reads_ = 0;
    uint64_t page_writes_ = 0;
    uint64_t gc_ops_ = 0;
    uint64_t relocated_ = 0;
    uint64_t erases_ = 0;
    uint64_t retired_ = 0;
    uint64_t retire_target_ = 0;
    bool wearout_hit_ = false;
    double wearout_time_ms_ = -1.0;
    uint64_t window_sum_ = 0;
    uint64_t window_count_ = 0;
    double latency_sum_ms_ = 0.0;
    double first_arrival_ms_ = -1.0;
    double last_completion_ms_ = 0.0;
    std::vector<double> occupancy_accum_;
    uint64_t occupancy_samples_ = 0;
    std::vector<OccupancySnapshot> snapshots_;
};

/// Drive a whole request stream through a fresh simulator.
SimReport simulate(std::span<const IoRequest> stream, const SimConfig& config,
                   TransitionObserver* observer = nullptr);

struct DurabilityResult {
    double lifetime_ms = 0.0;
    SimReport report;
};

/// One row per report; caller supplies the row labels.
void write_report_csv(std::ostream& out, std::span<const std::string> labels,
                      std::span<const SimReport> reports);

/// Human-oriented multi-line summary of one report.
void write_report_summary(std::ostream& out, const std::string& label, const SimReport& report);

/// Columns: t_ms, n_0..n_k.
void write_snapshots_csv(std::ostream& out, std::span<const OccupancySnapshot> snapshots);

/// Run a generated workload until the bad-block budget is exhausted
/// (config.erase_limit and config.bad_block_budget must be set; the initial
/// state must be Empty). Throws InconclusiveRunError if max_requests pass
/// without wearing the device out.
template <typename Stream>
DurabilityResult run_durability(Stream& workload, const SimConfig& config,
                                uint64_t max_requests) {
    SimConfig cfg = config;
    cfg.initial = InitialState::Empty;
    SsdSimulator sim(cfg);
    uint64_t used = 0;
    while (!sim.worn_out()) {
        if (used == max_requests) {
            const double target =
                std::ceil(cfg.bad_block_budget *
                          static_cast<double>(cfg.geometry.blocks_per_package) *
                          cfg.geometry.packages);
            throw InconclusiveRunError(
                "run_durability: request budget exhausted before wearout",
                static_cast<double>(sim.retired_blocks()) / target);
        }
        sim.apply_request(workload.next());
        ++used;
    }
    DurabilityResult result;
    result.report = sim.report();
    result.lifetime_ms = result.report.lifetime_ms;
    return result;
}

}  // namespace ssdgc
