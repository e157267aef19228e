#include "ssdgc/workload.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace ssdgc {

namespace {

constexpr uint32_t kSectorBytes = 512;

double draw_uniform(std::mt19937_64& rng) {
    // 53-bit mantissa draw in [0, 1).
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t draw_index(std::mt19937_64& rng, uint64_t n) {
    // Rejection sampling keeps the draw unbiased and the stream portable.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

double draw_interarrival(const SyntheticSpec& spec, std::mt19937_64& rng) {
    switch (spec.arrival) {
        case ArrivalProcess::Poisson: {
            const double u = 1.0 - draw_uniform(rng);  // avoid log(0)
            return -spec.mean_interarrival_ms * std::log(u);
        }
        case ArrivalProcess::Normal: {
            // Box-Muller; truncated at zero.
            const double u1 = 1.0 - draw_uniform(rng);
            const double u2 = draw_uniform(rng);
            const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
            return std::max(0.0, spec.mean_interarrival_ms + spec.stddev_interarrival_ms * z);
        }
    }
    return spec.mean_interarrival_ms;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (!(mean_interarrival_ms > 0.0))
        throw std::invalid_argument("synthetic spec: mean inter-arrival must be > 0");
    if (arrival == ArrivalProcess::Normal && !(stddev_interarrival_ms >= 0.0))
        throw std::invalid_argument("synthetic spec: stddev must be >= 0");
    if (!(write_ratio >= 0.0) || !(write_ratio <= 1.0))
        throw std::invalid_argument("synthetic spec: write_ratio must be in [0, 1]");
    if (request_bytes == 0 || request_bytes % kSectorBytes != 0)
        throw std::invalid_argument("synthetic spec: request_bytes must be a multiple of 512");
    if (!(hot_fraction > 0.0) || !(hot_fraction <= 1.0))
        throw std::invalid_argument("synthetic spec: hot_fraction must be in (0, 1]");
    if (!(hot_write_probability >= 0.0) || !(hot_write_probability <= 1.0))
        throw std::invalid_argument("synthetic spec: hot_write_probability must be in [0, 1]");
}

SyntheticStream::SyntheticStream(const SyntheticSpec& spec, uint64_t logical_pages,
                                 uint32_t page_size)
    : spec_(spec), logical_pages_(logical_pages), page_size_(page_size), rng_(spec.seed) {
    spec.validate();
    if (logical_pages == 0) throw std::invalid_argument("synthetic stream: empty logical space");
    pages_per_request_ = (spec.request_bytes + page_size - 1) / page_size;
    region_pages_ = std::max<uint64_t>(
        pages_per_request_,
        static_cast<uint64_t>(spec.hot_fraction * static_cast<double>(logical_pages)));
    region_pages_ = std::min(region_pages_, logical_pages);
}

IoRequest SyntheticStream::next() {
    clock_ms_ += draw_interarrival(spec_, rng_);

    const bool cold = region_pages_ < logical_pages_ && spec_.hot_write_probability < 1.0 &&
                      draw_uniform(rng_) >= spec_.hot_write_probability;
    bool sequential = spec_.pattern == AccessPattern::Sequential;
    if (spec_.pattern == AccessPattern::Hybrid) sequential = draw_uniform(rng_) < 0.5;

    uint64_t start_page;
    if (cold) {
        // Scattered update somewhere in the cold remainder.
        const uint64_t cold_pages = logical_pages_ - region_pages_;
        start_page = region_pages_ +
                     draw_index(rng_, std::max<uint64_t>(1, cold_pages - pages_per_request_ + 1));
    } else if (sequential) {
        if (cursor_page_ + pages_per_request_ > region_pages_) cursor_page_ = 0;
        start_page = cursor_page_;
        cursor_page_ = start_page + pages_per_request_;
    } else {
        start_page = draw_index(rng_, region_pages_ - pages_per_request_ + 1);
        cursor_page_ = start_page + pages_per_request_;
    }

    IoRequest req;
    req.arrival_ms = clock_ms_;
    req.lba = start_page * (page_size_ / kSectorBytes);
    req.bytes = spec_.request_bytes;
    req.op = (spec_.write_ratio >= 1.0 || draw_uniform(rng_) < spec_.write_ratio)
                 ? IoOp::Write
                 : IoOp::Read;
    return req;
}

std::vector<IoRequest> generate_synthetic(const SyntheticSpec& spec, uint64_t logical_pages,
                                          uint32_t page_size) {
    SyntheticStream stream(spec, logical_pages, page_size);
    std::vector<IoRequest> out;
    out.reserve(spec.request_count);
    for (uint64_t i = 0; i < spec.request_count; ++i) out.push_back(stream.next());
    return out;
}

FillThenChurnStream::FillThenChurnStream(const SyntheticSpec& churn, uint64_t logical_pages,
                                         uint32_t page_size, double fill_fraction)
    : fill_remaining_(0), page_size_(page_size), churn_(churn, logical_pages, page_size) {
    if (!(fill_fraction > 0.0) || !(fill_fraction > churn.hot_fraction - 1e-12) ||
        !(fill_fraction <= 1.0))
        throw std::invalid_argument(
            "fill-then-churn: fill_fraction must be in (0, 1] and cover the hot region");
    pages_per_request_ = (churn.request_bytes + page_size - 1) / page_size;
    fill_remaining_ = static_cast<uint64_t>(fill_fraction * static_cast<double>(logical_pages)) /
                      pages_per_request_;
}

IoRequest FillThenChurnStream::next() {
    if (fill_remaining_ > 0) {
        --fill_remaining_;
        IoRequest req;
        clock_ms_ += 0.01;
        req.arrival_ms = clock_ms_;
        req.lba = fill_cursor_ * (page_size_ / kSectorBytes);
        req.bytes = static_cast<uint32_t>(pages_per_request_ * page_size_);
        req.op = IoOp::Write;
        fill_cursor_ += pages_per_request_;
        return req;
    }
    IoRequest req = churn_.next();
    req.arrival_ms += clock_ms_;
    return req;
}

namespace {

bool split_fields(const std::string& line, char sep, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    return !out.empty();
}

}  // namespace

TraceParseResult parse_trace(std::istream& in, TraceFormat format, uint64_t logical_sectors) {
    TraceParseResult result;
    std::string line;
    std::vector<std::string> fields;
    uint64_t line_no = 0;
    bool header_done = format == TraceFormat::Spc1;  // SPC-1 files have no header

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (!header_done) {
            if (line != "time_ms,op,lba,bytes")
                throw std::runtime_error("trace parse: expected header time_ms,op,lba,bytes, got '" +
                                         line + "'");
            header_done = true;
            continue;
        }

        split_fields(line, ',', fields);
        IoRequest req;
        bool ok = true;
        try {
            if (format == TraceFormat::Spc1) {
                // asu,lba,size,opcode,timestamp — timestamp in seconds.
                if (fields.size() < 5) throw std::invalid_argument("field count");
                req.lba = std::stoull(fields[1]);
                req.bytes = static_cast<uint32_t>(std::stoul(fields[2]));
                const char op = fields[3].empty() ? '?' : fields[3][0];
                if (op == 'W' || op == 'w')
                    req.op = IoOp::Write;
                else if (op == 'R' || op == 'r')
                    req.op = IoOp::Read;
                else
                    throw std::invalid_argument("opcode");
                req.arrival_ms = std::stod(fields[4]) * 1000.0;
            } else {
                if (fields.size() < 4) throw std::invalid_argument("field count");
                req.arrival_ms = std::stod(fields[0]);
                const char op = fields[1].empty() ? '?' : fields[1][0];
                if (op == 'W' || op == 'w')
                    req.op = IoOp::Write;
                else if (op == 'R' || op == 'r')
                    req.op = IoOp::Read;
                else
                    throw std::invalid_argument("opcode");
                req.lba = std::stoull(fields[2]);
                req.bytes = static_cast<uint32_t>(std::stoul(fields[3]));
            }
            if (req.bytes == 0) throw std::invalid_argument("zero size");
        } catch (const std::exception& e) {
            result.diagnostics.push_back("line " + std::to_string(line_no) + ": " + e.what());
            ok = false;
        }
        if (!ok) continue;

        const uint64_t end_sector = req.lba + (req.bytes + kSectorBytes - 1) / kSectorBytes;
        if (end_sector > logical_sectors) {
            ++result.out_of_range;
            continue;
        }
        result.requests.push_back(req);
    }
    return result;
}

std::vector<IoRequest> align_to_pages(std::span<const IoRequest> stream, uint32_t page_size) {
    if (page_size < kSectorBytes || page_size % kSectorBytes != 0 ||
        (page_size & (page_size - 1)) != 0)
        throw std::invalid_argument("align_to_pages: page size must be a power-of-two multiple "
                                    "of 512");
    const uint32_t sectors_per_page = page_size / kSectorBytes;
    std::vector<IoRequest> out;
    out.reserve(stream.size());
    for (const IoRequest& req : stream) {
        const uint64_t first_page = req.lba / sectors_per_page;
        const uint64_t last_page =
            (req.lba * kSectorBytes + req.bytes + page_size - 1) / page_size;
        for (uint64_t page = first_page; page < last_page; ++page) {
            IoRequest one = req;
            one.lba = page * sectors_per_page;
            one.bytes = page_size;
            out.push_back(one);
        }
    }
    return out;
}

std::vector<IoRequest> replay(std::span<const IoRequest> base, uint64_t cycles,
                              uint64_t target_total) {
    if (base.empty()) throw std::invalid_argument("replay: empty base stream");
    if (cycles < 1 && target_total == 0)
        throw std::invalid_argument("replay: need cycles >= 1 or a target total");

    const double span = base.back().arrival_ms - base.front().arrival_ms;
    const double mean_gap = base.size() > 1 ? span / static_cast<double>(base.size() - 1)
                                            : base.front().arrival_ms;
    const double cycle_shift = span + mean_gap;

    uint64_t total = target_total > 0 ? target_total : cycles * base.size();
    std::vector<IoRequest> out;
    out.reserve(total);
    for (uint64_t j = 0;; ++j) {
        const double shift = static_cast<double>(j) * cycle_shift;
        for (const IoRequest& req : base) {
            if (out.size() == total) return out;
            IoRequest copy = req;
            copy.arrival_ms += shift;
            out.push_back(copy);
        }
        if (target_total == 0 && j + 1 == cycles) return out;
    }
}

double sequential_ratio(std::span<const IoRequest> stream) {
    if (stream.size() < 2) return 0.0;
    uint64_t sequential = 0;
    for (size_t i = 1; i < stream.size(); ++i) {
        const IoRequest& prev = stream[i - 1];
        const uint64_t prev_end = prev.lba + (prev.bytes + kSectorBytes - 1) / kSectorBytes;
        if (stream[i].lba == prev_end) ++sequential;
    }
    return static_cast<double>(sequential) / static_cast<double>(stream.size());
}

}  // namespace ssdgc
