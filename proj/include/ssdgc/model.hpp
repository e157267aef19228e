#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace ssdgc {

/// Physical layout of one SSD; defaults describe a common SLC part.
struct SsdGeometry {
    uint32_t blocks_per_package = 16384;
    uint32_t pages_per_block = 64;
    uint32_t page_size = 4096;  // bytes
    uint32_t packages = 1;
    double over_provisioning = 0.15;  // fraction hidden from the logical space
    double gc_threshold = 0.05;       // free-block fraction that triggers GC

    uint64_t logical_pages_per_package() const;
    uint64_t logical_pages_total() const;
    uint64_t physical_pages_per_package() const;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

/// Distribution over block types 0..k, where type i means i valid pages.
struct OccupancyVector {
    std::vector<double> p;

    int k() const { return static_cast<int>(p.size()) - 1; }
    /// Mean number of valid pages, sum_i i*p[i].
    double mean_valid() const;
    /// Throws std::invalid_argument unless entries are >= 0 and sum to 1
    /// within tol.
    void validate(double tol = 1e-9) const;
};

/// Per-request birth-death transition probabilities of a single block,
/// conditioned on that block being the one the request touches.
struct TransitionModel {
    double lambda = 1.0;       // program/invalidate requests per time unit
    std::vector<double> up;    // up[i] = P(i -> i+1), up[k] = 0
    std::vector<double> down;  // down[i] = P(i -> i-1), down[0] = 0

    int k() const { return static_cast<int>(up.size()) - 1; }
    void validate() const;
};

/// GC selection weights w[0..k]; feasible against pi when sum w[i]*pi[i] = 1.
struct WeightVector {
    std::vector<double> w;

    int k() const { return static_cast<int>(w.size()) - 1; }
    double constraint_sum(const OccupancyVector& pi) const;
    bool feasible_for(const OccupancyVector& pi, double tol = 1e-9) const;
};

/// One (cleaning cost, wear-leveling) operating point.
struct TradeoffPoint {
    double cost = 0.0;  // valid pages per GC operation, in [0, k]
    double wear = 1.0;  // fairness index, in (0, 1]
    std::optional<WeightVector> weights;
};

/// Steady-state occupancy under the uniform workload: p[i] = C(k,i) / 2^k.
/// k must be in [1, 1029]; beyond that the smallest entry is not
/// representable as a double.
OccupancyVector binomial_fixed_point(int k);

/// Uniform-workload transitions: up[i] = (k-i)/k, down[i] = i/k.
TransitionModel uniform_transition_model(int k, double lambda);

/// Stationary distribution of an irreducible birth-death transition model;
/// tail products are evaluated in log space. Throws DegenerateModelError if
/// an interior transition probability is zero.
OccupancyVector general_fixed_point(const TransitionModel& model);

}  // namespace ssdgc
