#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssdgc::oracle {

double exact_binomial_mass(int k, int i) {
    if (k < 0 || k > 120 || i < 0 || i > k)
        throw std::invalid_argument("exact_binomial_mass: out of range");
    std::vector<unsigned __int128> row(static_cast<size_t>(k) + 1, 0);
    row[0] = 1;
    for (int r = 1; r <= k; ++r)
        for (int c = r; c > 0; --c) row[c] += row[c - 1];
    return std::ldexp(static_cast<double>(row[i]), -k);
}

std::vector<double> stationary_by_linear_solve(const TransitionModel& model) {
    const int n = model.k() + 1;
    // Rows: balance equations (pi Q)_j = 0 for j < n-1, then sum pi = 1.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int j = 0; j < n - 1; ++j) {
        a[j][j] = -(model.up[j] + model.down[j]);
        if (j > 0) a[j][j - 1] = model.up[j - 1];
        if (j < n - 1) a[j][j + 1] = model.down[j + 1];
    }
    for (int i = 0; i < n; ++i) a[n - 1][i] = 1.0;
    a[n - 1][n] = 1.0;

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        if (a[col][col] == 0.0) throw std::runtime_error("singular balance system");
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
    return pi;
}

std::vector<double> project_polytope(std::span<const double> z0, std::span<const double> b1,
                                     std::span<const double> b2, double t1, double t2) {
    // Active-set method: on the free set the projection is an equality
    // projection with two multipliers; clipped coordinates leave the set,
    // coordinates whose unconstrained value turns positive re-enter. Only
    // 2x2 solves are involved, so wildly different coordinate scales (the
    // binomial tails) are handled exactly.
    const size_t n = z0.size();
    std::vector<bool> free_set(n, true);
    std::vector<double> z(n, 0.0);
    double alpha = 0.0, beta = 0.0;

    const int max_rounds = static_cast<int>(8 * n + 32);
    for (int round = 0; round < max_rounds; ++round) {
        double g11 = 0, g12 = 0, g22 = 0, r1 = -t1, r2 = -t2;
        for (size_t i = 0; i < n; ++i) {
            if (!free_set[i]) continue;
            g11 += b1[i] * b1[i];
            g12 += b1[i] * b2[i];
            g22 += b2[i] * b2[i];
            r1 += b1[i] * z0[i];
            r2 += b2[i] * z0[i];
        }
        const double det = g11 * g22 - g12 * g12;
        if (det <= 0.0) throw std::runtime_error("project_polytope: degenerate free set");
        alpha = (g22 * r1 - g12 * r2) / det;
        beta = (g11 * r2 - g12 * r1) / det;

        double most_negative = 0.0;
        size_t drop = n;
        for (size_t i = 0; i < n; ++i) {
            if (!free_set[i]) continue;
            const double v = z0[i] - alpha * b1[i] - beta * b2[i];
            // Relative slack: a clipped coordinate of a tiny scale must not
            // bounce the active set forever.
            if (v < most_negative * std::max(1.0, std::abs(z0[i]))) {
                most_negative = v / std::max(1.0, std::abs(z0[i]));
                drop = i;
            }
        }
        if (drop < n && most_negative < -1e-14) {
            free_set[drop] = false;
            continue;
        }

        double worst_gain = 0.0;
        size_t enter = n;
        for (size_t i = 0; i < n; ++i) {
            if (free_set[i]) continue;
            const double v = z0[i] - alpha * b1[i] - beta * b2[i];
            if (v > worst_gain * std::max(1.0, std::abs(z0[i]))) {
                worst_gain = v / std::max(1.0, std::abs(z0[i]));
                enter = i;
            }
        }
        if (enter < n && worst_gain > 1e-14) {
            free_set[enter] = true;
            continue;
        }
        break;
    }

    for (size_t i = 0; i < n; ++i)
        z[i] = free_set[i] ? std::max(0.0, z0[i] - alpha * b1[i] - beta * b2[i]) : 0.0;
    double c1 = 0, c2 = 0, s1 = std::abs(t1), s2 = std::abs(t2);
    for (size_t i = 0; i < n; ++i) {
        c1 += b1[i] * z[i];
        c2 += b2[i] * z[i];
        s1 += std::abs(b1[i] * z[i]);
        s2 += std::abs(b2[i] * z[i]);
    }
    if (std::abs(c1 - t1) > 1e-9 * std::max(1.0, s1) ||
        std::abs(c2 - t2) > 1e-9 * std::max(1.0, s2))
        throw std::runtime_error("project_polytope: projection did not reach the constraints");
    return z;
}

double projected_gradient_max_wear(const OccupancyVector& pi, double c_star, int restarts,
                                   uint64_t seed) {
    const int k = pi.k();
    const size_t n = pi.p.size();
    std::vector<double> b1(n), b2(n);
    for (int i = 0; i <= k; ++i) {
        b1[i] = std::sqrt(pi.p[i]);
        b2[i] = static_cast<double>(i) * b1[i];
    }

    std::mt19937_64 rng(seed);
    double best = 1e300;
    std::vector<double> z(n), scaled(n);
    for (int r = 0; r < restarts; ++r) {
        for (size_t i = 0; i < n; ++i)
            z[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-3;
        z = project_polytope(z, b1, b2, 1.0, c_star);
        // Gradient of |z|^2 is 2z; with step 0.45 the iterate contracts fast
        // toward the projection of the origin.
        for (int iter = 0; iter < 300; ++iter) {
            double moved = 0.0;
            for (size_t i = 0; i < n; ++i) scaled[i] = 0.1 * z[i];
            std::vector<double> next = project_polytope(scaled, b1, b2, 1.0, c_star);
            for (size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(next[i] - z[i]));
            z.swap(next);
            if (moved < 1e-15) break;
        }
        double obj = 0.0;
        for (double v : z) obj += v * v;
        best = std::min(best, obj);
    }
    return 1.0 / best;
}

WeightVector random_feasible_weights(const OccupancyVector& pi, double c_star,
                                     std::mt19937_64& rng) {
    // Sample selection masses y_i = w_i pi_i: their constraint polytope is a
    // simplex slice in unit scale, so the projection is well conditioned no
    // matter how skewed pi is.
    const int k = pi.k();
    const size_t n = pi.p.size();
    std::vector<double> ones(n, 1.0), idx(n), y0(n);
    for (int i = 0; i <= k; ++i) {
        idx[i] = static_cast<double>(i);
        y0[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 / static_cast<double>(n);
    }
    const std::vector<double> y = project_polytope(y0, ones, idx, 1.0, c_star);
    WeightVector w;
    w.w.resize(n);
    for (size_t i = 0; i < n; ++i) w.w[i] = std::max(0.0, y[i] / pi.p[i]);
    return w;
}

void feed_synthetic_chain(TransitionEstimator& estimator, const TransitionModel& model,
                          uint32_t blocks, uint64_t burn_in, uint64_t recorded, uint64_t seed) {
    const int k = model.k();
    std::mt19937_64 rng(seed);
    std::vector<int> state(blocks, k / 2);
    std::vector<uint32_t> hist(static_cast<size_t>(k) + 1, 0);
    for (int s : state) hist[s]++;

    auto step = [&](bool record) {
        const uint32_t b = static_cast<uint32_t>(rng() % blocks);
        const int i = state[b];
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        int to = i;
        const double total = model.up[i] + model.down[i];
        if (total > 0.0) {
            if (u < model.up[i])
                to = i + 1;
            else if (u < total)
                to = i - 1;
        }
        if (record) {
            const BlockMove move{i, to};
            estimator.on_request(hist, std::span<const BlockMove>(&move, to == i ? 0 : 1));
        }
        if (to != i) {
            hist[i]--;
            hist[to]++;
            state[b] = to;
        }
    };
    for (uint64_t r = 0; r < burn_in; ++r) step(false);
    for (uint64_t r = 0; r < recorded; ++r) step(true);
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
}

}  // namespace ssdgc::oracle
