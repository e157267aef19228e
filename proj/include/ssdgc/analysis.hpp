#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "ssdgc/model.hpp"

namespace ssdgc {

/// Average valid pages relocated per GC operation: sum_i i*w[i]*pi[i].
/// Throws std::invalid_argument if the weights are infeasible for pi.
double cleaning_cost(const WeightVector& w, const OccupancyVector& pi);

/// Fairness index of the selection distribution: 1 / sum_i w[i]^2*pi[i].
double wear_leveling(const WeightVector& w, const OccupancyVector& pi);

/// Uniform selection: w[i] = 1 for all i. Maximizes wear-leveling.
WeightVector random_policy(const OccupancyVector& pi);

/// Always reclaim an empty block: w[0] = 1/pi[0], rest 0. Minimizes cost.
/// Throws ZeroProbabilityTypeError when pi[0] = 0.
WeightVector greedy_policy(const OccupancyVector& pi);

/// Selection weights of randomized-greedy victim choice with an integer
/// window d: w[i]*pi[i] = T_i^d - T_{i+1}^d where T_i is the tail mass of
/// types >= i. Requires every pi[i] > 0.
WeightVector rga_weights(const OccupancyVector& pi, int d);

/// Operating point for a real window size d >= 1. Non-integer d mixes the
/// floor/ceil weight vectors: w(d) = p*w(floor d) + (1-p)*w(floor d + 1)
/// with p = floor(d) + 1 - d.
TradeoffPoint rga_point(const OccupancyVector& pi, double d);

/// Generic hook: window size drawn from a discrete distribution given as
/// (window, probability) atoms. The two-point form above is the special case.
TradeoffPoint rga_point(const OccupancyVector& pi,
                        std::span<const std::pair<int, double>> window_dist);

enum class KktRegime {
    CostZero,     // c* = 0, greedy point
    LowerBranch,  // 0 < c* < mean, support on types 0..breakpoint
    RandomPoint,  // c* = mean, all-ones weights
    UpperBranch,  // mean < c* < k, support on types breakpoint..k
    CostMax,      // c* = k
};

const char* to_string(KktRegime regime);

/// Closed-form solution of: maximize wear-leveling subject to a fixed
/// cleaning cost. Slack multipliers close the stationarity conditions
/// 2*w[i]*pi[i] - u[i] + v1*pi[i] + v2*i*pi[i] = 0.
struct KktSolution {
    KktRegime regime;
    int breakpoint = -1;  // support boundary index; -1 for the point regimes
    double v1 = 0.0;
    double v2 = 0.0;
    std::vector<double> slack;  // u[i], zero on the support
    WeightVector weights;
    double cost = 0.0;  // the requested c*
    double wear = 0.0;  // the achieved maximum W*
};

/// Maximum wear-leveling at cleaning cost c_star in [0, k]. Requires every
/// pi[i] > 0 (throws ZeroProbabilityTypeError otherwise).
KktSolution optimal_wear_leveling(const OccupancyVector& pi, double c_star);

std::vector<KktSolution> tradeoff_curve(const OccupancyVector& pi,
                                        std::span<const double> c_star_grid);

/// Columns: c_star, w_star, regime, breakpoint.
void write_curve_csv(std::ostream& out, std::span<const KktSolution> curve);

/// Columns: d, cost, wear.
void write_rga_sweep_csv(std::ostream& out,
                         std::span<const std::pair<double, TradeoffPoint>> sweep);

}  // namespace ssdgc
