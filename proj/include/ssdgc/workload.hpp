#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace ssdgc {

enum class IoOp : uint8_t { Read, Write };

struct IoRequest {
    double arrival_ms = 0.0;
    uint64_t lba = 0;     // 512-byte sectors
    uint32_t bytes = 0;
    IoOp op = IoOp::Write;
};

enum class AccessPattern { Random, Sequential, Hybrid };
enum class ArrivalProcess { Poisson, Normal };

struct SyntheticSpec {
    AccessPattern pattern = AccessPattern::Random;
    ArrivalProcess arrival = ArrivalProcess::Poisson;
    double mean_interarrival_ms = 100.0;
    double stddev_interarrival_ms = 10.0;  // Normal arrivals only
    double write_ratio = 1.0;
    uint64_t request_count = 0;
    uint32_t request_bytes = 4096;
    /// Fraction of the logical space forming the hot region at the bottom
    /// of the address range. 1.0 spans everything; smaller values model the
    /// limited footprint of replayed traces.
    double hot_fraction = 1.0;
    /// Probability that a request targets the hot region. Requests falling
    /// outside it pick a uniform address in the cold remainder, giving the
    /// classic skewed-update mix when hot_fraction < 1.
    double hot_write_probability = 1.0;
    uint64_t seed = 1;

    void validate() const;
};

/// Pull-based request source. Streams are infinite; callers decide how many
/// requests to take. Deterministic per (spec, seed).
class SyntheticStream {
public:
    SyntheticStream(const SyntheticSpec& spec, uint64_t logical_pages, uint32_t page_size);
    IoRequest next();

private:
    SyntheticSpec spec_;
    uint64_t region_pages_;   // hot region size
    uint64_t logical_pages_;
    uint32_t page_size_;
    uint64_t pages_per_request_;
    std::mt19937_64 rng_;
    double clock_ms_ = 0.0;
    uint64_t cursor_page_ = 0;  // Sequential: page right after the last access
};

/// First request_count requests of a SyntheticStream.
std::vector<IoRequest> generate_synthetic(const SyntheticSpec& spec, uint64_t logical_pages,
                                          uint32_t page_size);

/// Write the workload's footprint once, in order, with negligible spacing;
/// then switch to the churn spec. Models a freshly installed device that
/// keeps rewriting a working set. fill_fraction < 1 leaves the tail of the
/// logical space unmapped, the way a trace with a bounded footprint does;
/// the churn spec's hot_fraction is interpreted within the whole space, so
/// it should not exceed fill_fraction.
class FillThenChurnStream {
public:
    FillThenChurnStream(const SyntheticSpec& churn, uint64_t logical_pages, uint32_t page_size,
                        double fill_fraction = 1.0);
    IoRequest next();

private:
    uint64_t fill_remaining_;
    uint64_t fill_cursor_ = 0;
    uint64_t pages_per_request_;
    uint32_t page_size_;
    double clock_ms_ = 0.0;
    SyntheticStream churn_;
};

enum class TraceFormat { Spc1, Csv };

struct TraceParseResult {
    std::vector<IoRequest> requests;
    uint64_t out_of_range = 0;  // requests dropped for exceeding the logical space
    std::vector<std::string> diagnostics;  // per-line parse problems
};

/// Spc1: "asu,lba,size,opcode,timestamp" with the timestamp in seconds.
/// Csv: header "time_ms,op,lba,bytes". Requests reaching past
/// logical_sectors are filtered and counted. Malformed lines produce
/// line-numbered diagnostics; a malformed header throws.
TraceParseResult parse_trace(std::istream& in, TraceFormat format, uint64_t logical_sectors);

/// Round every request outward to whole pages and emit one single-page
/// request per covered page. page_size must be a power-of-two multiple
/// of 512.
std::vector<IoRequest> align_to_pages(std::span<const IoRequest> stream, uint32_t page_size);

/// Concatenate shifted copies of the stream; copy j starts one mean
/// inter-arrival after copy j-1 ends. When target_total > 0 the output is
/// cut to exactly that many requests (and cycles is ignored if more copies
/// are needed).
std::vector<IoRequest> replay(std::span<const IoRequest> base, uint64_t cycles,
                              uint64_t target_total = 0);

/// Fraction of requests whose start immediately follows the previous
/// request's end, computed on the raw (pre-alignment) stream.
double sequential_ratio(std::span<const IoRequest> stream);

}  // namespace ssdgc
