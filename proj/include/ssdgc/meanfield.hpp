#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ssdgc/model.hpp"

namespace ssdgc {

struct OdeConfig {
    double dt = 0.0;              // step size in model time units
    double max_time = 0.0;        // give up past this point
    double convergence_eps = 0.0; // L-inf norm of ds/dt that counts as steady

    void validate() const;
};

/// dt = 0.1/lambda; max_time scales with k so slow modes of wide chains
/// still have room to decay.
OdeConfig default_ode_config(const TransitionModel& model);

/// Right-hand side of the occupancy ODEs:
///   ds_i/dt = -lambda (down_i + up_i) s_i
///             + lambda up_{i-1} s_{i-1} + lambda down_{i+1} s_{i+1}.
/// Components sum to zero; mass is conserved.
std::vector<double> occupancy_drift(const OccupancyVector& s, const TransitionModel& model);

struct TrajectorySample {
    double t;
    std::vector<double> s;
};

struct IntegrationResult {
    OccupancyVector steady;
    std::vector<TrajectorySample> trajectory;
    double residual = 0.0;  // final L-inf drift norm
    double elapsed = 0.0;   // model time at convergence
    uint64_t steps = 0;
    uint64_t clip_events = 0;  // steps where a small negative entry was clipped
};

/// Fixed-step RK4 until the drift residual drops below convergence_eps.
/// Throws ConvergenceTimeout past max_time. The returned vector is
/// renormalized to sum exactly 1.
IntegrationResult integrate_to_steady_state(const OccupancyVector& s0,
                                            const TransitionModel& model,
                                            const OdeConfig& cfg);

/// Columns: t, s_0..s_k.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory);

/// A single block's one-step move within a request.
struct BlockMove {
    int from;
    int to;  // from +- 1
};

/// One request's worth of evidence: the block-type counts seen just before
/// the request, and every single-step transition it caused (an in-place
/// update moves two blocks, a read none).
struct TransitionObservation {
    std::vector<uint32_t> state_counts;
    std::vector<BlockMove> moves;
};

/// Receives per-request transition evidence from a running simulation.
class TransitionObserver {
public:
    virtual ~TransitionObserver() = default;
    virtual void on_request(std::span<const uint32_t> state_counts,
                            std::span<const BlockMove> moves) = 0;
};

/// Accumulates the per-request ratio estimator: each request with n_i > 0
/// contributes n_{i,j}/n_i to the average for state i; requests where
/// n_i = 0 are skipped for that state. The raw average is a per-block
/// per-request probability (order 1/N); estimate() rescales by the block
/// count so the result is conditioned on the accessed block, matching the
/// TransitionModel convention. The rescaling cancels in fixed-point ratios.
class TransitionEstimator : public TransitionObserver {
public:
    explicit TransitionEstimator(int k);

    void on_request(std::span<const uint32_t> state_counts,
                    std::span<const BlockMove> moves) override;
    void record(const TransitionObservation& obs);

    /// Conditioned transition probabilities. Throws std::invalid_argument on
    /// an empty stream. States that were never populated get zero
    /// probabilities; see unobserved_states().
    TransitionModel estimate(double lambda = 1.0) const;

    /// The unscaled average of n_{i,j}/n_i, j = i+1 for up.
    double raw_ratio_average(int state, bool up) const;

    /// Flags for states with no request where n_i > 0.
    std::vector<bool> unobserved_states() const;
    uint64_t requests() const { return requests_; }

private:
    int k_;
    uint64_t requests_ = 0;
    std::vector<uint64_t> populated_;   // requests with n_i > 0
    std::vector<double> up_sum_;        // sum of 1/n_i over i -> i+1 events
    std::vector<double> down_sum_;      // sum of 1/n_i over i -> i-1 events
    std::vector<double> up_scaled_;     // sum of N/n_i over i -> i+1 events
    std::vector<double> down_scaled_;   // sum of N/n_i over i -> i-1 events
};

}  // namespace ssdgc
