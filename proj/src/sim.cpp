#include "ssdgc/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ssdgc/errors.hpp"

namespace ssdgc {

namespace {

constexpr uint32_t kNone = UINT32_MAX;
constexpr uint32_t kSectorBytes = 512;

uint64_t draw_index(std::mt19937_64& rng, uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

double draw_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void TimingModel::validate() const {
    if (read_page_ms < 0 || write_page_ms < 0 || erase_block_ms < 0 || transfer_per_byte_ms < 0)
        throw std::invalid_argument("timing model: latencies must be >= 0");
}

void GcPolicy::validate() const {
    if (kind == GcKind::Rga && !(window >= 1.0))
        throw std::invalid_argument("gc policy: rga window must be >= 1");
}

std::string GcPolicy::label() const {
    switch (kind) {
        case GcKind::Greedy: return "greedy";
        case GcKind::Random: return "random";
        case GcKind::Rga: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "rga:%g", window);
            return buf;
        }
    }
    return "?";
}

void SimConfig::validate() const {
    geometry.validate();
    timing.validate();
    policy.validate();
    if (bad_block_budget < 0.0 || bad_block_budget >= 1.0)
        throw std::invalid_argument("sim config: bad_block_budget must be in [0, 1)");
    if (bad_block_budget > 0.0 && erase_limit == 0)
        throw std::invalid_argument("sim config: bad_block_budget needs an erase_limit");
}

double empirical_wear_leveling(std::span<const uint32_t> erase_counts) {
    if (erase_counts.empty())
        throw std::invalid_argument("empirical_wear_leveling: no blocks");
    double sum = 0.0, sum_sq = 0.0;
    for (uint32_t c : erase_counts) {
        sum += c;
        sum_sq += static_cast<double>(c) * c;
    }
    if (sum_sq == 0.0)
        throw std::invalid_argument("empirical_wear_leveling: all erase counts are zero");
    return sum * sum / (static_cast<double>(erase_counts.size()) * sum_sq);
}

SsdSimulator::SsdSimulator(const SimConfig& config) : config_(config) {
    config.validate();
    pages_per_block_ = config.geometry.pages_per_block;
    logical_pages_ = config.geometry.logical_pages_per_package();
    if (config.erase_limit > 0 && config.bad_block_budget > 0.0)
        retire_target_ = static_cast<uint64_t>(
            std::ceil(config.bad_block_budget *
                      static_cast<double>(config.geometry.blocks_per_package) *
                      config.geometry.packages));

    packages_.resize(config.geometry.packages);
    const uint64_t mapped =
        config.initial == InitialState::Full ? logical_pages_ : 0;
    for (uint32_t p = 0; p < config.geometry.packages; ++p) {
        packages_[p].rng.seed(config.seed + 0x9e3779b97f4a7c15ULL * (p + 1));
        init_package(packages_[p], mapped);
    }
}

void SsdSimulator::init_package(Package& pkg, uint64_t mapped_pages) {
    const uint32_t n = config_.geometry.blocks_per_package;
    const uint32_t k = pages_per_block_;
    pkg.pages.assign(static_cast<size_t>(n) * k, PageState::Clean);
    pkg.reverse_lpn.assign(static_cast<size_t>(n) * k, kNone);
    pkg.map.assign(logical_pages_, kNone);
    pkg.blocks.assign(n, Block{});
    pkg.hist.assign(static_cast<size_t>(k) + 1, 0);
    pkg.hist[0] = n;
    pkg.active_blocks = n;

    uint32_t next_block = 0;
    if (mapped_pages > 0) {
        // Full initial state: logical pages laid out in order; the last,
        // possibly partial, block becomes the write frontier.
        for (uint64_t lpn = 0; lpn < mapped_pages; ++lpn) {
            const uint32_t block = static_cast<uint32_t>(lpn / k);
            const uint32_t off = static_cast<uint32_t>(lpn % k);
            const uint32_t phys = block * k + off;
            pkg.pages[phys] = PageState::Valid;
            pkg.reverse_lpn[phys] = static_cast<uint32_t>(lpn);
            pkg.map[lpn] = phys;
            pkg.blocks[block].valid++;
            pkg.blocks[block].fill++;
        }
        next_block = static_cast<uint32_t>((mapped_pages + k - 1) / k);
        for (uint32_t b = 0; b + 1 < next_block; ++b) {
            pkg.blocks[b].status = Block::Status::InUse;
            pkg.hist[0]--;
            pkg.hist[pkg.blocks[b].valid]++;
            make_eligible(pkg, b);
        }
        const uint32_t last = next_block - 1;
        if (pkg.blocks[last].fill == k) {
            pkg.blocks[last].status = Block::Status::InUse;
            pkg.hist[0]--;
            pkg.hist[pkg.blocks[last].valid]++;
            make_eligible(pkg, last);
        } else {
            pkg.frontier = last;
            pkg.blocks[last].status = Block::Status::Frontier;
            pkg.hist[0]--;
            pkg.hist[pkg.blocks[last].valid]++;
        }
    }
    for (uint32_t b = next_block; b < n; ++b) pkg.free_list.push_back(b);
    if (pkg.frontier == kNone) pkg.frontier = acquire_frontier(pkg);
}

void SsdSimulator::make_eligible(Package& pkg, uint32_t block) {
    Block& b = pkg.blocks[block];
    b.eligible_pos = static_cast<uint32_t>(pkg.eligible.size());
    pkg.eligible.push_back(block);
    pkg.by_valid.insert({b.valid, block});
}

void SsdSimulator::drop_eligible(Package& pkg, uint32_t block) {
    Block& b = pkg.blocks[block];
    const uint32_t pos = b.eligible_pos;
    const uint32_t last = pkg.eligible.back();
    pkg.eligible[pos] = last;
    pkg.blocks[last].eligible_pos = pos;
    pkg.eligible.pop_back();
    b.eligible_pos = kNone;
    pkg.by_valid.erase({b.valid, block});
}

void SsdSimulator::change_valid(Package& pkg, uint32_t block, int delta) {
    Block& b = pkg.blocks[block];
    pkg.hist[b.valid]--;
    if (b.eligible_pos != kNone) pkg.by_valid.erase({b.valid, block});
    b.valid = static_cast<uint32_t>(static_cast<int64_t>(b.valid) + delta);
    pkg.hist[b.valid]++;
    if (b.eligible_pos != kNone) pkg.by_valid.insert({b.valid, block});
}

uint32_t SsdSimulator::acquire_frontier(Package& pkg) {
    if (pkg.free_list.empty())
        throw GcDeadlockError("no free block available for the write frontier\n" + state_dump());
    const uint32_t block = pkg.free_list.front();
    pkg.free_list.pop_front();
    pkg.blocks[block].status = Block::Status::Frontier;
    pkg.blocks[block].fill = 0;
    return block;
}

uint32_t SsdSimulator::program_page(Package& pkg, uint32_t local_lpn) {
    const uint32_t block = pkg.frontier;
    Block& fb = pkg.blocks[block];
    const uint32_t phys = block * pages_per_block_ + fb.fill;
    fb.fill++;
    pkg.pages[phys] = PageState::Valid;
    pkg.reverse_lpn[phys] = local_lpn;
    pkg.map[local_lpn] = phys;
    change_valid(pkg, block, +1);
    if (fb.fill == pages_per_block_) {
        // Fully programmed: joins the GC-eligible pool, a free block takes
        // over as the frontier.
        fb.status = Block::Status::InUse;
        make_eligible(pkg, block);
        pkg.frontier = acquire_frontier(pkg);
    }
    return phys;
}

void SsdSimulator::invalidate_page(Package& pkg, uint32_t phys) {
    const uint32_t block = phys / pages_per_block_;
    pkg.pages[phys] = PageState::Invalid;
    pkg.reverse_lpn[phys] = kNone;
    change_valid(pkg, block, -1);
}

uint32_t SsdSimulator::select_victim(uint32_t package) {
    Package& pkg = packages_[package];
    if (pkg.eligible.empty())
        throw GcStarvationError("select_victim: no eligible block\n" + state_dump());

    switch (config_.policy.kind) {
        case GcKind::Greedy:
            return pkg.by_valid.begin()->second;
        case GcKind::Random:
            return pkg.eligible[draw_index(pkg.rng, pkg.eligible.size())];
        case GcKind::Rga: {
            const double d = config_.policy.window;
            const double lo = std::floor(d);
            uint64_t window = static_cast<uint64_t>(lo);
            const double p_lo = lo + 1.0 - d;
            if (p_lo < 1.0 && draw_uniform(pkg.rng) >= p_lo) ++window;
            window_sum_ += window;
            ++window_count_;
            if (window >= pkg.eligible.size()) return pkg.by_valid.begin()->second;

            // Floyd's sampling of `window` distinct candidates; keep the one
            // with the fewest valid pages (ties: lowest id).
            const uint64_t n = pkg.eligible.size();
            uint32_t best = kNone;
            std::vector<uint64_t> chosen;
            chosen.reserve(window);
            for (uint64_t j = n - window; j < n; ++j) {
                uint64_t t = draw_index(pkg.rng, j + 1);
                if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) t = j;
                chosen.push_back(t);
                const uint32_t candidate = pkg.eligible[t];
                if (best == kNone ||
                    std::pair(pkg.blocks[candidate].valid, candidate) <
                        std::pair(pkg.blocks[best].valid, best))
                    best = candidate;
            }
            return best;
        }
    }
    throw std::logic_error("select_victim: unknown policy");
}

void SsdSimulator::erase_block(Package& pkg, uint32_t block) {
    Block& b = pkg.blocks[block];
    const uint32_t base = block * pages_per_block_;
    for (uint32_t off = 0; off < pages_per_block_; ++off) {
        pkg.pages[base + off] = PageState::Clean;
        pkg.reverse_lpn[base + off] = kNone;
    }
    b.fill = 0;
    b.erases++;
    ++erases_;
    if (config_.erase_limit > 0 && b.erases >= config_.erase_limit) {
        b.status = Block::Status::Retired;
        pkg.hist[0]--;
        pkg.active_blocks--;
        ++retired_;
        if (retire_target_ > 0 && retired_ >= retire_target_) wearout_hit_ = true;
    } else {
        b.status = Block::Status::Free;
        pkg.free_list.push_back(block);
    }
}

uint32_t SsdSimulator::run_gc(uint32_t package, double& service_ms) {
    Package& pkg = packages_[package];
    const uint32_t victim = select_victim(package);
    drop_eligible(pkg, victim);

    // Relocation is observed page by page: each moved page steps the victim
    // down one state and the frontier up one, against a shared pre-move
    // snapshot. Measured transition flows then stay balanced edge by edge
    // even under heavy GC; the erase itself happens on a type-0 block and
    // moves nothing.
    const uint32_t moved = pkg.blocks[victim].valid;
    const uint32_t base = victim * pages_per_block_;
    for (uint32_t off = 0; off < pages_per_block_ && pkg.blocks[victim].valid > 0; ++off) {
        const uint32_t phys = base + off;
        if (pkg.pages[phys] != PageState::Valid) continue;
        const uint32_t lpn = pkg.reverse_lpn[phys];
        if (observer_) {
            const int vv = static_cast<int>(pkg.blocks[victim].valid);
            const int vf = static_cast<int>(pkg.blocks[pkg.frontier].valid);
            const BlockMove moves[2] = {{vv, vv - 1}, {vf, vf + 1}};
            observer_->on_request(pkg.hist, moves);
        }
        invalidate_page(pkg, phys);
        program_page(pkg, lpn);
    }
    service_ms += moved * (config_.timing.read_page_ms + config_.timing.write_page_ms +
                           config_.geometry.page_size * config_.timing.transfer_per_byte_ms);
    service_ms += config_.timing.erase_block_ms;
    erase_block(pkg, victim);

    ++gc_ops_;
    relocated_ += moved;
    return moved;
}

void SsdSimulator::collect_if_needed(Package& pkg, double& service_ms) {
    const double threshold = config_.geometry.gc_threshold * pkg.active_blocks;
    if (static_cast<double>(pkg.free_list.size()) >= threshold) return;
    const uint32_t package = static_cast<uint32_t>(&pkg - packages_.data());
    // One block of hysteresis so a single erase does not immediately re-arm
    // the trigger.
    uint64_t guard = 8ULL * pkg.active_blocks + 64;
    while (static_cast<double>(pkg.free_list.size()) < threshold + 1.0) {
        // A durability run is over once the bad-block budget fills; stop
        // collecting so the death spiral of a worn-out pool cannot mask the
        // lifetime measurement.
        if (wearout_hit_) break;
        if (guard-- == 0)
            throw GcDeadlockError("collect_if_needed: GC makes no progress\n" + state_dump());
        run_gc(package, service_ms);
    }
}

double SsdSimulator::page_service_ms(IoOp op) const {
    const double transfer = config_.geometry.page_size * config_.timing.transfer_per_byte_ms;
    return transfer +
           (op == IoOp::Read ? config_.timing.read_page_ms : config_.timing.write_page_ms);
}

double SsdSimulator::apply_request(const IoRequest& request) {
    const uint32_t page_size = config_.geometry.page_size;
    const uint64_t start_page = request.lba * kSectorBytes / page_size;
    const uint64_t end_page =
        (request.lba * kSectorBytes + request.bytes + page_size - 1) / page_size;
    if (end_page > config_.geometry.logical_pages_total() || request.bytes == 0) {
        ++rejected_;
        return -1.0;
    }
    if (first_arrival_ms_ < 0.0) first_arrival_ms_ = request.arrival_ms;

    double completion = request.arrival_ms;
    for (uint64_t lpn = start_page; lpn < end_page; ++lpn) {
        const uint32_t pkg_idx = static_cast<uint32_t>(lpn % packages_.size());
        const uint32_t local = static_cast<uint32_t>(lpn / packages_.size());
        Package& pkg = packages_[pkg_idx];

        double service = page_service_ms(request.op);
        if (request.op == IoOp::Write) {
            const uint32_t old_phys = pkg.map[local];
            const uint32_t old_block = old_phys == kNone ? kNone : old_phys / pages_per_block_;
            if (observer_) {
                BlockMove moves[2];
                size_t n_moves = 0;
                if (old_block == pkg.frontier) {
                    // In-place rewrite of a frontier-resident page nets out
                    // to no block-type change.
                } else {
                    if (old_block != kNone) {
                        const int v = static_cast<int>(pkg.blocks[old_block].valid);
                        moves[n_moves++] = {v, v - 1};
                    }
                    const int vf = static_cast<int>(pkg.blocks[pkg.frontier].valid);
                    moves[n_moves++] = {vf, vf + 1};
                }
                observer_->on_request(pkg.hist, std::span<const BlockMove>(moves, n_moves));
            }
            if (old_phys != kNone) invalidate_page(pkg, old_phys);
            program_page(pkg, local);
            ++page_writes_;
            collect_if_needed(pkg, service);
        } else {
            ++page_reads_;
        }

        const double start = std::max(request.arrival_ms, pkg.busy_until_ms);
        pkg.busy_until_ms = start + service;
        completion = std::max(completion, pkg.busy_until_ms);
    }

    ++served_;
    const double latency = completion - request.arrival_ms;
    latency_sum_ms_ += latency;
    last_completion_ms_ = std::max(last_completion_ms_, completion);
    if (wearout_hit_ && wearout_time_ms_ < 0.0)
        wearout_time_ms_ = completion - first_arrival_ms_;

    if (occupancy_accum_.empty()) occupancy_accum_.assign(pages_per_block_ + 1, 0.0);
    uint64_t active = 0;
    for (const Package& pkg : packages_) active += pkg.active_blocks;
    for (size_t i = 0; i <= pages_per_block_; ++i) {
        uint64_t n = 0;
        for (const Package& pkg : packages_) n += pkg.hist[i];
        occupancy_accum_[i] += static_cast<double>(n) / static_cast<double>(active);
    }
    ++occupancy_samples_;

    if (config_.snapshot_every > 0 && served_ % config_.snapshot_every == 0)
        snapshots_.push_back({request.arrival_ms, occupancy_counts()});
    return latency;
}

std::vector<uint32_t> SsdSimulator::occupancy_counts() const {
    std::vector<uint32_t> counts(pages_per_block_ + 1, 0);
    for (const Package& pkg : packages_)
        for (size_t i = 0; i < counts.size(); ++i) counts[i] += pkg.hist[i];
    return counts;
}

OccupancyVector SsdSimulator::occupancy_measure() const {
    const std::vector<uint32_t> counts = occupancy_counts();
    uint64_t total = 0;
    for (uint32_t c : counts) total += c;
    OccupancyVector m;
    m.p.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i)
        m.p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return m;
}

OccupancyVector SsdSimulator::mean_occupancy() const {
    if (occupancy_samples_ == 0) return occupancy_measure();
    OccupancyVector m;
    m.p.resize(occupancy_accum_.size());
    for (size_t i = 0; i < m.p.size(); ++i)
        m.p[i] = occupancy_accum_[i] / static_cast<double>(occupancy_samples_);
    return m;
}

std::vector<uint32_t> SsdSimulator::erase_counts() const {
    std::vector<uint32_t> counts;
    counts.reserve(static_cast<size_t>(config_.geometry.blocks_per_package) * packages_.size());
    for (const Package& pkg : packages_)
        for (const Block& b : pkg.blocks) counts.push_back(b.erases);
    return counts;
}

uint64_t SsdSimulator::free_blocks(uint32_t package) const {
    return packages_[package].free_list.size();
}

uint64_t SsdSimulator::eligible_blocks(uint32_t package) const {
    return packages_[package].eligible.size();
}

uint32_t SsdSimulator::block_valid_count(uint32_t package, uint32_t block) const {
    return packages_[package].blocks[block].valid;
}

PageState SsdSimulator::page_state(uint32_t package, uint32_t block, uint32_t page) const {
    return packages_[package].pages[static_cast<size_t>(block) * pages_per_block_ + page];
}

uint64_t SsdSimulator::page_state_total(PageState state) const {
    uint64_t total = 0;
    for (const Package& pkg : packages_)
        for (PageState s : pkg.pages)
            if (s == state) ++total;
    return total;
}

void SsdSimulator::check_consistency() const {
    for (const Package& pkg : packages_) {
        std::vector<uint32_t> valid_per_block(pkg.blocks.size(), 0);
        for (size_t phys = 0; phys < pkg.pages.size(); ++phys) {
            const bool is_valid = pkg.pages[phys] == PageState::Valid;
            const uint32_t lpn = pkg.reverse_lpn[phys];
            if (is_valid) {
                valid_per_block[phys / pages_per_block_]++;
                if (lpn == kNone || pkg.map[lpn] != phys)
                    throw std::logic_error("consistency: valid page not mapped back");
            } else if (lpn != kNone) {
                throw std::logic_error("consistency: stale reverse mapping");
            }
        }
        for (size_t lpn = 0; lpn < pkg.map.size(); ++lpn) {
            const uint32_t phys = pkg.map[lpn];
            if (phys != kNone && pkg.pages[phys] != PageState::Valid)
                throw std::logic_error("consistency: mapped page is not valid");
            if (phys != kNone && pkg.reverse_lpn[phys] != lpn)
                throw std::logic_error("consistency: map/reverse-map mismatch");
        }
        for (size_t b = 0; b < pkg.blocks.size(); ++b)
            if (pkg.blocks[b].valid != valid_per_block[b])
                throw std::logic_error("consistency: cached valid count is off");
    }
}

SimReport SsdSimulator::report() const {
    SimReport r;
    r.served_requests = served_;
    r.rejected_requests = rejected_;
    r.page_reads = page_reads_;
    r.page_writes = page_writes_;
    r.gc_operations = gc_ops_;
    r.relocated_pages = relocated_;
    r.total_erases = erases_;
    r.retired_blocks = retired_;
    r.cleaning_cost =
        gc_ops_ > 0 ? static_cast<double>(relocated_) / static_cast<double>(gc_ops_) : 0.0;
    const std::vector<uint32_t> erases = erase_counts();
    bool any = false;
    for (uint32_t c : erases) any = any || c > 0;
    r.wear_leveling = any ? empirical_wear_leveling(erases) : 0.0;
    r.span_ms = first_arrival_ms_ >= 0.0 ? last_completion_ms_ - first_arrival_ms_ : 0.0;
    r.iops = r.span_ms > 0.0 ? static_cast<double>(served_) / (r.span_ms / 1000.0) : 0.0;
    r.mean_latency_ms = served_ > 0 ? latency_sum_ms_ / static_cast<double>(served_) : 0.0;
    r.mean_window = window_count_ > 0
                        ? static_cast<double>(window_sum_) / static_cast<double>(window_count_)
                        : 0.0;
    r.lifetime_ms = wearout_time_ms_ >= 0.0
                        ? wearout_time_ms_
                        : (wearout_hit_ ? last_completion_ms_ - first_arrival_ms_ : 0.0);
    r.occupancy = occupancy_counts();
    r.occupancy_mean = mean_occupancy().p;
    r.snapshots = snapshots_;
    return r;
}

std::string SsdSimulator::state_dump() const {
    std::ostringstream out;
    out << "ssdgc-state-dump v1\n";
    out << "policy " << config_.policy.label() << " seed " << config_.seed << "\n";
    out << "served " << served_ << " gc_ops " << gc_ops_ << " erases " << erases_ << " retired "
        << retired_ << "\n";
    for (size_t p = 0; p < packages_.size(); ++p) {
        const Package& pkg = packages_[p];
        out << "package " << p << " free " << pkg.free_list.size() << " eligible "
            << pkg.eligible.size() << " active " << pkg.active_blocks << " busy_until_ms "
            << pkg.busy_until_ms << "\n";
        out << "hist";
        for (uint32_t h : pkg.hist) out << ' ' << h;
        out << "\n";
    }
    return out.str();
}

void SsdSimulator::attach_observer(TransitionObserver* observer) { observer_ = observer; }

SimReport simulate(std::span<const IoRequest> stream, const SimConfig& config,
                   TransitionObserver* observer) {
    SsdSimulator sim(config);
    if (observer) sim.attach_observer(observer);
    for (const IoRequest& req : stream) sim.apply_request(req);
    return sim.report();
}

void write_report_csv(std::ostream& out, std::span<const std::string> labels,
                      std::span<const SimReport> reports) {
    out << "policy,served_requests,rejected_requests,page_writes,gc_operations,"
           "relocated_pages,total_erases,retired_blocks,cleaning_cost,wear_leveling,iops,"
           "mean_latency_ms,span_ms,mean_window,lifetime_ms\n";
    char buf[160];
    for (size_t i = 0; i < reports.size(); ++i) {
        const SimReport& r = reports[i];
        out << labels[i] << ',' << r.served_requests << ',' << r.rejected_requests << ','
            << r.page_writes << ',' << r.gc_operations << ',' << r.relocated_pages << ','
            << r.total_erases << ',' << r.retired_blocks;
        std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g",
                      r.cleaning_cost, r.wear_leveling, r.iops, r.mean_latency_ms, r.span_ms,
                      r.mean_window, r.lifetime_ms);
        out << buf << "\n";
    }
}

void write_report_summary(std::ostream& out, const std::string& label, const SimReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%s: served=%llu gc=%llu cost=%.4g wear=%.4g iops=%.4g erases=%llu",
                  label.c_str(), static_cast<unsigned long long>(r.served_requests),
                  static_cast<unsigned long long>(r.gc_operations), r.cleaning_cost,
                  r.wear_leveling, r.iops, static_cast<unsigned long long>(r.total_erases));
    out << buf;
    if (r.lifetime_ms > 0.0) {
        std::snprintf(buf, sizeof buf, " lifetime_ms=%.6g retired=%llu", r.lifetime_ms,
                      static_cast<unsigned long long>(r.retired_blocks));
        out << buf;
    }
    out << "\n";
}

void write_snapshots_csv(std::ostream& out, std::span<const OccupancySnapshot> snapshots) {
    if (snapshots.empty()) return;
    out << "t_ms";
    for (size_t i = 0; i < snapshots.front().counts.size(); ++i) out << ",n_" << i;
    out << "\n";
    char buf[32];
    for (const auto& snap : snapshots) {
        std::snprintf(buf, sizeof buf, "%.12g", snap.t_ms);
        out << buf;
        for (uint32_t c : snap.counts) out << ',' << c;
        out << "\n";
    }
}

}  // namespace ssdgc
