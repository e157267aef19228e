#include "ssdgc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ssdgc/errors.hpp"

namespace ssdgc {

namespace {

// Compensated accumulation; keeps closed-form identities like the binomial
// mean exact to the last bit.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

uint64_t SsdGeometry::logical_pages_per_package() const {
    const double physical = static_cast<double>(blocks_per_package) * pages_per_block;
    return static_cast<uint64_t>((1.0 - over_provisioning) * physical);
}

uint64_t SsdGeometry::logical_pages_total() const {
    return logical_pages_per_package() * packages;
}

uint64_t SsdGeometry::physical_pages_per_package() const {
    return static_cast<uint64_t>(blocks_per_package) * pages_per_block;
}

void SsdGeometry::validate() const {
    if (blocks_per_package < 1)
        throw std::invalid_argument("geometry: blocks_per_package must be >= 1");
    if (pages_per_block < 1)
        throw std::invalid_argument("geometry: pages_per_block must be >= 1");
    if (page_size < 512)
        throw std::invalid_argument("geometry: page_size must be >= 512 bytes");
    if (packages < 1)
        throw std::invalid_argument("geometry: packages must be >= 1");
    if (over_provisioning < 0.0 || over_provisioning >= 1.0)
        throw std::invalid_argument("geometry: over_provisioning must be in [0, 1)");
    if (gc_threshold <= 0.0 || gc_threshold >= 1.0)
        throw std::invalid_argument("geometry: gc_threshold must be in (0, 1)");
    if (logical_pages_per_package() == 0)
        throw std::invalid_argument("geometry: logical space is empty");
}

double OccupancyVector::mean_valid() const {
    KahanSum m;
    for (size_t i = 0; i < p.size(); ++i) m.add(static_cast<double>(i) * p[i]);
    return m.sum;
}

void OccupancyVector::validate(double tol) const {
    if (p.size() < 2) throw std::invalid_argument("occupancy: need at least types 0 and 1");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::invalid_argument("occupancy: negative entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument("occupancy: entries sum to " + std::to_string(sum) +
                                    ", expected 1");
}

void TransitionModel::validate() const {
    if (up.size() < 2 || up.size() != down.size())
        throw std::invalid_argument("transition model: up/down must both have k+1 entries");
    if (!(lambda > 0.0)) throw std::invalid_argument("transition model: lambda must be > 0");
    for (size_t i = 0; i < up.size(); ++i) {
        if (!(up[i] >= 0.0) || !(down[i] >= 0.0))
            throw std::invalid_argument("transition model: negative probability");
    }
    if (down.front() != 0.0)
        throw std::invalid_argument("transition model: down[0] must be 0");
    if (up.back() != 0.0)
        throw std::invalid_argument("transition model: up[k] must be 0");
}

double WeightVector::constraint_sum(const OccupancyVector& pi) const {
    if (w.size() != pi.p.size())
        throw std::invalid_argument("weights: dimension mismatch with occupancy");
    KahanSum s;
    for (size_t i = 0; i < w.size(); ++i) s.add(w[i] * pi.p[i]);
    return s.sum;
}

bool WeightVector::feasible_for(const OccupancyVector& pi, double tol) const {
    for (double v : w)
        if (!(v >= 0.0)) return false;
    return std::abs(constraint_sum(pi) - 1.0) <= tol;
}

OccupancyVector binomial_fixed_point(int k) {
    // Beyond k = 1029 the tail entry 2^-k underflows past the subnormal range.
    if (k < 1 || k > 1029)
        throw std::invalid_argument("binomial_fixed_point: k must be in [1, 1029]");
    OccupancyVector pi;
    pi.p.assign(static_cast<size_t>(k) + 1, 0.0);
    // Multiplicative recurrence from the exact power of two, mirrored so the
    // result is symmetric to the bit.
    pi.p[0] = std::ldexp(1.0, -k);
    for (int i = 0; i + 1 <= k / 2; ++i)
        pi.p[i + 1] = pi.p[i] * static_cast<double>(k - i) / static_cast<double>(i + 1);
    for (int i = 0; i <= k / 2; ++i) pi.p[k - i] = pi.p[i];
    // Nudge the center so the entries sum to exactly one. The adjustment is
    // a few parts in 1e16, well inside the rounding of the large
    // coefficients, and it keeps closed-form identities like the mean k/2
    // exact. Split evenly for odd k so the vector stays symmetric.
    for (int pass = 0; pass < 4; ++pass) {
        long double sum = 0.0L;
        for (double v : pi.p) sum += v;
        const double deficit = static_cast<double>(1.0L - sum);
        if (deficit == 0.0) break;
        if (k % 2 == 0) {
            pi.p[k / 2] += deficit;
        } else {
            pi.p[k / 2] += deficit / 2.0;
            pi.p[k / 2 + 1] += deficit / 2.0;
        }
    }
    return pi;
}

TransitionModel uniform_transition_model(int k, double lambda) {
    if (k < 1) throw std::invalid_argument("uniform_transition_model: k must be >= 1");
    if (!(lambda > 0.0))
        throw std::invalid_argument("uniform_transition_model: lambda must be > 0");
    TransitionModel m;
    m.lambda = lambda;
    m.up.resize(static_cast<size_t>(k) + 1);
    m.down.resize(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        m.up[i] = static_cast<double>(k - i) / k;
        m.down[i] = static_cast<double>(i) / k;
    }
    return m;
}

OccupancyVector general_fixed_point(const TransitionModel& model) {
    model.validate();
    const int k = model.k();
    for (int i = 0; i < k; ++i)
        if (model.up[i] <= 0.0)
            throw DegenerateModelError(
                "general_fixed_point: up[" + std::to_string(i) + "] is zero, chain is reducible",
                i);
    for (int i = 1; i <= k; ++i)
        if (model.down[i] <= 0.0)
            throw DegenerateModelError(
                "general_fixed_point: down[" + std::to_string(i) +
                    "] is zero, chain is reducible",
                i);

    // log pi_i relative to pi_k: sum of log down over (i, k] minus log up
    // over [i, k).
    std::vector<double> log_ratio(static_cast<size_t>(k) + 1, 0.0);
    for (int i = k - 1; i >= 0; --i)
        log_ratio[i] = log_ratio[i + 1] + std::log(model.down[i + 1]) - std::log(model.up[i]);

    const double max_lr = *std::max_element(log_ratio.begin(), log_ratio.end());
    OccupancyVector pi;
    pi.p.resize(static_cast<size_t>(k) + 1);
    double norm = 0.0;
    for (int i = 0; i <= k; ++i) {
        pi.p[i] = std::exp(log_ratio[i] - max_lr);
        norm += pi.p[i];
    }
    for (double& v : pi.p) v /= norm;
    return pi;
}

}  // namespace ssdgc
