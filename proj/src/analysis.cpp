#include "ssdgc/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ssdgc/errors.hpp"

namespace ssdgc {

namespace {

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

void require_feasible(const WeightVector& w, const OccupancyVector& pi) {
    pi.validate();
    if (w.w.size() != pi.p.size())
        throw std::invalid_argument("weights and occupancy have different lengths");
    for (double v : w.w)
        if (!(v >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
    const double s = w.constraint_sum(pi);
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("weight constraint sum w*pi = " + std::to_string(s) +
                                    ", expected 1");
}

void require_positive(const OccupancyVector& pi, const char* who) {
    pi.validate();
    for (size_t i = 0; i < pi.p.size(); ++i)
        if (pi.p[i] <= 0.0)
            throw ZeroProbabilityTypeError(
                std::string(who) + ": pi[" + std::to_string(i) + "] is zero",
                static_cast<int>(i));
}

std::vector<double> tail_masses(const OccupancyVector& pi) {
    const int k = pi.k();
    std::vector<double> tail(static_cast<size_t>(k) + 2, 0.0);
    for (int i = k; i >= 0; --i) tail[i] = tail[i + 1] + pi.p[i];
    return tail;
}

}  // namespace

double cleaning_cost(const WeightVector& w, const OccupancyVector& pi) {
    require_feasible(w, pi);
    KahanSum c;
    for (size_t i = 0; i < w.w.size(); ++i) c.add(static_cast<double>(i) * w.w[i] * pi.p[i]);
    return c.sum;
}

double wear_leveling(const WeightVector& w, const OccupancyVector& pi) {
    require_feasible(w, pi);
    KahanSum denom;
    for (size_t i = 0; i < w.w.size(); ++i) denom.add(w.w[i] * w.w[i] * pi.p[i]);
    if (denom.sum <= 0.0) throw std::invalid_argument("wear_leveling: all weights are zero");
    return 1.0 / denom.sum;
}

WeightVector random_policy(const OccupancyVector& pi) {
    pi.validate();
    WeightVector w;
    w.w.assign(pi.p.size(), 1.0);
    return w;
}

WeightVector greedy_policy(const OccupancyVector& pi) {
    pi.validate();
    if (pi.p[0] <= 0.0)
        throw ZeroProbabilityTypeError("greedy_policy: no type-0 blocks (pi[0] = 0)", 0);
    WeightVector w;
    w.w.assign(pi.p.size(), 0.0);
    w.w[0] = 1.0 / pi.p[0];
    return w;
}

WeightVector rga_weights(const OccupancyVector& pi, int d) {
    require_positive(pi, "rga_weights");
    if (d < 1) throw std::invalid_argument("rga_weights: window size must be >= 1");
    if (d == 1) return random_policy(pi);

    const int k = pi.k();
    const std::vector<double> tail = tail_masses(pi);
    WeightVector w;
    w.w.resize(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        const double selected = std::pow(tail[i], d) - std::pow(tail[i + 1], d);
        w.w[i] = selected / pi.p[i];
    }
    return w;
}

TradeoffPoint rga_point(const OccupancyVector& pi, double d) {
    if (!(d >= 1.0)) throw std::invalid_argument("rga_point: window size must be >= 1");
    const double lo = std::floor(d);
    const double p_lo = lo + 1.0 - d;  // d = p*floor(d) + (1-p)*(floor(d)+1)
    const std::pair<int, double> atoms[2] = {
        {static_cast<int>(lo), p_lo},
        {static_cast<int>(lo) + 1, 1.0 - p_lo},
    };
    return rga_point(pi, std::span<const std::pair<int, double>>(atoms, p_lo == 1.0 ? 1 : 2));
}

TradeoffPoint rga_point(const OccupancyVector& pi,
                        std::span<const std::pair<int, double>> window_dist) {
    if (window_dist.empty()) throw std::invalid_argument("rga_point: empty window distribution");
    double mass = 0.0;
    for (const auto& [window, prob] : window_dist) {
        if (window < 1) throw std::invalid_argument("rga_point: window size must be >= 1");
        if (!(prob >= 0.0)) throw std::invalid_argument("rga_point: negative probability");
        mass += prob;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("rga_point: window probabilities must sum to 1");

    WeightVector mixed;
    mixed.w.assign(pi.p.size(), 0.0);
    for (const auto& [window, prob] : window_dist) {
        if (prob == 0.0) continue;
        const WeightVector wd = rga_weights(pi, window);
        for (size_t i = 0; i < mixed.w.size(); ++i) mixed.w[i] += prob * wd.w[i];
    }

    TradeoffPoint point;
    point.cost = cleaning_cost(mixed, pi);
    point.wear = wear_leveling(mixed, pi);
    point.weights = std::move(mixed);
    return point;
}

const char* to_string(KktRegime regime) {
    switch (regime) {
        case KktRegime::CostZero: return "cost_zero";
        case KktRegime::LowerBranch: return "lower_branch";
        case KktRegime::RandomPoint: return "random_point";
        case KktRegime::UpperBranch: return "upper_branch";
        case KktRegime::CostMax: return "cost_max";
    }
    return "?";
}

namespace {

// Support on 0..I with linearly decreasing weights (X - i*Y)/Z. The scan
// starts at the first index where Y turns positive and stops at the first
// index bracketing X/Y, which always exists before or at k.
KktSolution solve_lower_branch(const OccupancyVector& pi, double c_star) {
    const int k = pi.k();
    double a = 0.0, b = 0.0, d2 = 0.0;  // running sums of pi, i*pi, i^2*pi
    int idx = 0;
    auto extend_to = [&](int j) {
        for (; idx <= j; ++idx) {
            const double pj = pi.p[idx];
            a += pj;
            b += static_cast<double>(idx) * pj;
            d2 += static_cast<double>(idx) * static_cast<double>(idx) * pj;
        }
    };

    int lead = 0;
    while (true) {
        extend_to(lead);
        if (b - c_star * a > 0.0) break;
        if (lead == k)
            throw std::runtime_error("optimal_wear_leveling: no feasible breakpoint (c* "
                                     "inconsistent with pi)");
        ++lead;
    }

    int support_end = lead;
    while (support_end < k) {
        extend_to(support_end);
        const double x = d2 - c_star * b;
        const double y = b - c_star * a;
        // Continue while X/Y > support_end + 1, in multiplied form (Y > 0 here).
        if (x <= (support_end + 1) * y) break;
        ++support_end;
    }
    extend_to(support_end);

    const double x = d2 - c_star * b;
    const double y = b - c_star * a;
    const double z = a * d2 - b * b;

    KktSolution sol;
    sol.regime = KktRegime::LowerBranch;
    sol.breakpoint = support_end;
    sol.v1 = -2.0 * x / z;
    sol.v2 = 2.0 * y / z;
    sol.weights.w.assign(static_cast<size_t>(k) + 1, 0.0);
    sol.slack.assign(static_cast<size_t>(k) + 1, 0.0);
    for (int i = 0; i <= support_end; ++i) {
        double wi = (x - static_cast<double>(i) * y) / z;
        if (wi < 0.0) {
            if (wi < -1e-12)
                throw std::runtime_error(
                    "optimal_wear_leveling: negative weight beyond roundoff, wrong branch");
            wi = 0.0;
        }
        sol.weights.w[i] = wi;
    }
    for (int i = support_end + 1; i <= k; ++i)
        sol.slack[i] = (sol.v1 + sol.v2 * static_cast<double>(i)) * pi.p[i];
    return sol;
}

KktSolution mirror(const KktSolution& inner, const OccupancyVector& pi) {
    const int k = pi.k();
    KktSolution sol;
    sol.regime = KktRegime::UpperBranch;
    sol.breakpoint = k - inner.breakpoint;
    sol.v1 = inner.v1 + static_cast<double>(k) * inner.v2;
    sol.v2 = -inner.v2;
    sol.weights.w.assign(static_cast<size_t>(k) + 1, 0.0);
    sol.slack.assign(static_cast<size_t>(k) + 1, 0.0);
    for (int i = 0; i <= k; ++i) {
        sol.weights.w[i] = inner.weights.w[k - i];
        sol.slack[i] = inner.slack[k - i];
    }
    return sol;
}

OccupancyVector reversed(const OccupancyVector& pi) {
    OccupancyVector r;
    r.p.assign(pi.p.rbegin(), pi.p.rend());
    return r;
}

}  // namespace

KktSolution optimal_wear_leveling(const OccupancyVector& pi, double c_star) {
    require_positive(pi, "optimal_wear_leveling");
    const int k = pi.k();
    if (!(c_star >= 0.0) || !(c_star <= static_cast<double>(k)))
        throw std::invalid_argument("optimal_wear_leveling: c* must lie in [0, k]");

    const double mean = pi.mean_valid();
    KktSolution sol;
    if (c_star == 0.0) {
        sol.regime = KktRegime::CostZero;
        sol.weights = greedy_policy(pi);
        sol.v1 = -2.0 / pi.p[0];
        sol.v2 = 2.0 / pi.p[0];
        sol.slack.assign(static_cast<size_t>(k) + 1, 0.0);
        for (int i = 1; i <= k; ++i)
            sol.slack[i] = (sol.v1 + sol.v2 * static_cast<double>(i)) * pi.p[i];
        sol.wear = pi.p[0];
    } else if (c_star == static_cast<double>(k)) {
        sol.regime = KktRegime::CostMax;
        sol.weights.w.assign(static_cast<size_t>(k) + 1, 0.0);
        sol.weights.w[k] = 1.0 / pi.p[k];
        sol.v2 = -2.0 / pi.p[k];
        sol.v1 = -2.0 / pi.p[k] - static_cast<double>(k) * sol.v2;
        sol.slack.assign(static_cast<size_t>(k) + 1, 0.0);
        for (int i = 0; i < k; ++i)
            sol.slack[i] = (sol.v1 + sol.v2 * static_cast<double>(i)) * pi.p[i];
        sol.wear = pi.p[k];
    } else if (c_star == mean) {
        sol.regime = KktRegime::RandomPoint;
        sol.weights = random_policy(pi);
        sol.v1 = -2.0;
        sol.v2 = 0.0;
        sol.slack.assign(static_cast<size_t>(k) + 1, 0.0);
        sol.wear = 1.0;
    } else if (c_star < mean) {
        sol = solve_lower_branch(pi, c_star);
        sol.wear = wear_leveling(sol.weights, pi);
    } else {
        sol = mirror(solve_lower_branch(reversed(pi), static_cast<double>(k) - c_star), pi);
        sol.wear = wear_leveling(sol.weights, pi);
    }
    sol.cost = c_star;
    return sol;
}

std::vector<KktSolution> tradeoff_curve(const OccupancyVector& pi,
                                        std::span<const double> c_star_grid) {
    std::vector<KktSolution> curve;
    curve.reserve(c_star_grid.size());
    for (double c : c_star_grid) curve.push_back(optimal_wear_leveling(pi, c));
    return curve;
}

void write_curve_csv(std::ostream& out, std::span<const KktSolution> curve) {
    out << "c_star,w_star,regime,breakpoint\n";
    char buf[64];
    for (const auto& sol : curve) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g", sol.cost, sol.wear);
        out << buf << ',' << to_string(sol.regime) << ',' << sol.breakpoint << "\n";
    }
}

void write_rga_sweep_csv(std::ostream& out,
                         std::span<const std::pair<double, TradeoffPoint>> sweep) {
    out << "d,cost,wear\n";
    char buf[96];
    for (const auto& [d, point] : sweep) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g", d, point.cost, point.wear);
        out << buf << "\n";
    }
}

}  // namespace ssdgc
