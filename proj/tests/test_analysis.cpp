#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ssdgc/analysis.hpp"
#include "ssdgc/errors.hpp"
#include "ssdgc/model.hpp"
#include "support/oracles.hpp"

using namespace ssdgc;

namespace {

// Discretized truncated normal over 0..k, same family as the curve studies.
OccupancyVector truncated_normal_pi(int k, double mu, double sigma) {
    OccupancyVector pi;
    pi.p.resize(k + 1);
    double sum = 0.0;
    for (int i = 0; i <= k; ++i) {
        const double x = (static_cast<double>(i) - mu) / sigma;
        pi.p[i] = std::exp(-0.5 * x * x);
        sum += pi.p[i];
    }
    for (double& v : pi.p) v /= sum;
    return pi;
}

void check_kkt_certificate(const KktSolution& sol, const OccupancyVector& pi) {
    const int k = pi.k();
    // Stationarity residual, scaled by the magnitude of its terms.
    for (int i = 0; i <= k; ++i) {
        const double t1 = 2.0 * sol.weights.w[i] * pi.p[i];
        const double t2 = sol.v1 * pi.p[i];
        const double t3 = sol.v2 * static_cast<double>(i) * pi.p[i];
        const double resid = t1 - sol.slack[i] + t2 + t3;
        const double scale = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3)});
        CHECK(std::abs(resid) / scale < 1e-8);
        CHECK(sol.slack[i] >= -1e-9);
        CHECK(std::abs(sol.slack[i] * sol.weights.w[i]) / scale < 1e-8);
    }
    CHECK(std::abs(sol.weights.constraint_sum(pi) - 1.0) < 1e-9);
    double cost = 0.0;
    for (int i = 0; i <= k; ++i) cost += i * sol.weights.w[i] * pi.p[i];
    CHECK(std::abs(cost - sol.cost) < 1e-9 * std::max(1.0, sol.cost));
}

}  // namespace

TEST_CASE("cleaning cost hand cases") {
    const OccupancyVector pi64 = binomial_fixed_point(64);
    CHECK(cleaning_cost(random_policy(pi64), pi64) == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(cleaning_cost(greedy_policy(pi64), pi64) == 0.0);

    const OccupancyVector pi{{0.25, 0.5, 0.25}};
    CHECK(cleaning_cost(WeightVector{{2.0, 1.0, 0.0}}, pi) == doctest::Approx(0.5));
}

TEST_CASE("cleaning cost rejects infeasible weights") {
    const OccupancyVector pi{{0.5, 0.5}};
    CHECK_THROWS_AS(cleaning_cost(WeightVector{{3.0, 3.0}}, pi), std::invalid_argument);
}

TEST_CASE("wear leveling hand cases") {
    const OccupancyVector pi8 = binomial_fixed_point(8);
    CHECK(wear_leveling(random_policy(pi8), pi8) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wear_leveling(greedy_policy(pi8), pi8) ==
          doctest::Approx(std::ldexp(1.0, -8)).epsilon(1e-12));

    const OccupancyVector pi{{0.25, 0.5, 0.25}};
    CHECK(wear_leveling(WeightVector{{2.0, 1.0, 0.0}}, pi) == doctest::Approx(1.0 / 1.5));
}

TEST_CASE("extremal policies") {
    const OccupancyVector pi{{0.5, 0.5}};
    const WeightVector g = greedy_policy(pi);
    CHECK(g.w == std::vector<double>{2.0, 0.0});
    CHECK(cleaning_cost(g, pi) == 0.0);
    CHECK(wear_leveling(g, pi) == doctest::Approx(0.5));

    const WeightVector r = random_policy(pi);
    CHECK(wear_leveling(r, pi) == doctest::Approx(1.0));
    CHECK(cleaning_cost(r, pi) == doctest::Approx(pi.mean_valid()));

    OccupancyVector no_empty{{0.0, 1.0}};
    CHECK_THROWS_AS(greedy_policy(no_empty), ZeroProbabilityTypeError);
}

TEST_CASE("rga weights: window one is the random policy") {
    const OccupancyVector pi = binomial_fixed_point(16);
    const WeightVector w = rga_weights(pi, 1);
    for (double v : w.w) CHECK(v == 1.0);
}

TEST_CASE("rga weights hand case d=2") {
    const OccupancyVector pi{{0.25, 0.5, 0.25}};
    const WeightVector w = rga_weights(pi, 2);
    CHECK(w.w[0] * pi.p[0] == doctest::Approx(0.4375).epsilon(1e-13));
    CHECK(w.w[1] * pi.p[1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(w.w[2] * pi.p[2] == doctest::Approx(0.0625).epsilon(1e-13));
    CHECK(w.constraint_sum(pi) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("rga weights concentrate on type 0 as the window grows") {
    const OccupancyVector pi = binomial_fixed_point(4);
    const WeightVector w = rga_weights(pi, 10000);
    CHECK(w.w[0] * pi.p[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w.constraint_sum(pi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rga weights require positive occupancy everywhere") {
    OccupancyVector pi{{0.5, 0.0, 0.5}};
    CHECK_THROWS_AS(rga_weights(pi, 2), ZeroProbabilityTypeError);
}

TEST_CASE("rga point hand case d=2") {
    const OccupancyVector pi{{0.25, 0.5, 0.25}};
    const TradeoffPoint pt = rga_point(pi, 2.0);
    CHECK(pt.cost == doctest::Approx(0.625).epsilon(1e-13));
    CHECK(pt.wear == doctest::Approx(1.0 / 1.28125).epsilon(1e-13));
}

TEST_CASE("rga point at d=1 is the random extremal point") {
    const OccupancyVector pi = binomial_fixed_point(64);
    const TradeoffPoint pt = rga_point(pi, 1.0);
    CHECK(pt.cost == cleaning_cost(random_policy(pi), pi));
    CHECK(pt.wear == wear_leveling(random_policy(pi), pi));
    CHECK(pt.cost == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(pt.wear == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-integer rga point is bracketed by its integer neighbours") {
    const OccupancyVector pi = binomial_fixed_point(16);
    for (double d : {1.25, 1.5, 2.75, 7.5}) {
        const TradeoffPoint mid = rga_point(pi, d);
        const TradeoffPoint lo = rga_point(pi, std::floor(d));
        const TradeoffPoint hi = rga_point(pi, std::floor(d) + 1.0);
        CHECK(mid.cost <= lo.cost + 1e-12);
        CHECK(mid.cost >= hi.cost - 1e-12);
    }
}

TEST_CASE("integer rga point equals the p=1 mixture exactly") {
    const OccupancyVector pi = binomial_fixed_point(16);
    for (int d : {1, 2, 5, 17}) {
        const TradeoffPoint direct = rga_point(pi, static_cast<double>(d));
        const WeightVector w = rga_weights(pi, d);
        CHECK(direct.cost == cleaning_cost(w, pi));
        CHECK(direct.wear == wear_leveling(w, pi));
    }
}

TEST_CASE("generic window distribution hook") {
    const OccupancyVector pi = binomial_fixed_point(8);
    const std::pair<int, double> atoms[] = {{1, 0.6}, {2, 0.4}};
    const TradeoffPoint via_dist = rga_point(pi, atoms);
    const TradeoffPoint via_d = rga_point(pi, 1.4);
    CHECK(via_dist.cost == doctest::Approx(via_d.cost).epsilon(1e-13));
    CHECK(via_dist.wear == doctest::Approx(via_d.wear).epsilon(1e-13));
}

TEST_CASE("optimal wear-leveling extremes") {
    const OccupancyVector pi64 = binomial_fixed_point(64);
    const double mean = pi64.mean_valid();

    const KktSolution at_zero = optimal_wear_leveling(pi64, 0.0);
    CHECK(at_zero.regime == KktRegime::CostZero);
    CHECK(at_zero.wear == pi64.p[0]);
    CHECK(at_zero.wear == std::ldexp(1.0, -64));
    check_kkt_certificate(at_zero, pi64);

    const KktSolution at_mean = optimal_wear_leveling(pi64, mean);
    CHECK(at_mean.regime == KktRegime::RandomPoint);
    CHECK(at_mean.wear == 1.0);
    check_kkt_certificate(at_mean, pi64);

    const KktSolution at_k = optimal_wear_leveling(pi64, 64.0);
    CHECK(at_k.regime == KktRegime::CostMax);
    CHECK(at_k.wear == pi64.p[64]);
    check_kkt_certificate(at_k, pi64);
}

TEST_CASE("optimal wear-leveling rejects bad inputs") {
    const OccupancyVector pi = binomial_fixed_point(4);
    CHECK_THROWS_AS(optimal_wear_leveling(pi, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(optimal_wear_leveling(pi, 4.5), std::invalid_argument);
    OccupancyVector zero{{0.5, 0.0, 0.5}};
    CHECK_THROWS_AS(optimal_wear_leveling(zero, 1.0), ZeroProbabilityTypeError);
}

TEST_CASE("optimal wear-leveling matches the projected-gradient oracle") {
    const OccupancyVector pi = binomial_fixed_point(4);
    const KktSolution sol = optimal_wear_leveling(pi, 1.0);
    check_kkt_certificate(sol, pi);
    const double oracle_w = oracle::projected_gradient_max_wear(pi, 1.0, 100, 42);
    CHECK(sol.wear == doctest::Approx(oracle_w).epsilon(1e-6));
}

TEST_CASE("optimal wear-leveling beats random feasible points on both branches") {
    std::mt19937_64 rng(17);
    const OccupancyVector pi = truncated_normal_pi(16, 7.0, 3.0);
    for (double c_star : {1.5, 4.0, 9.5, 13.0}) {
        const KktSolution sol = optimal_wear_leveling(pi, c_star);
        check_kkt_certificate(sol, pi);
        for (int i = 0; i < 200; ++i) {
            const WeightVector w = oracle::random_feasible_weights(pi, c_star, rng);
            CHECK(wear_leveling(w, pi) <= sol.wear + 1e-9);
        }
        const double oracle_w = oracle::projected_gradient_max_wear(
            pi, c_star, 20, 1000 + static_cast<uint64_t>(c_star * 10.0));
        CHECK(sol.wear == doctest::Approx(oracle_w).epsilon(1e-6));
    }
}

TEST_CASE("upper branch mirrors the lower branch") {
    const OccupancyVector pi = binomial_fixed_point(8);
    const double mean = pi.mean_valid();
    const KktSolution lower = optimal_wear_leveling(pi, mean - 1.5);
    const KktSolution upper = optimal_wear_leveling(pi, mean + 1.5);
    CHECK(lower.regime == KktRegime::LowerBranch);
    CHECK(upper.regime == KktRegime::UpperBranch);
    // The binomial is symmetric, so the two solutions are mirror images.
    for (int i = 0; i <= 8; ++i)
        CHECK(lower.weights.w[i] == doctest::Approx(upper.weights.w[8 - i]).epsilon(1e-10));
    CHECK(lower.wear == doctest::Approx(upper.wear).epsilon(1e-12));
    CHECK(upper.breakpoint == 8 - lower.breakpoint);
    check_kkt_certificate(upper, pi);
}

TEST_CASE("tradeoff curve shape") {
    const OccupancyVector pi = binomial_fixed_point(16);
    const double mean = pi.mean_valid();
    const double grid[] = {0.0, mean, 16.0};
    const std::vector<KktSolution> curve = tradeoff_curve(pi, grid);
    CHECK(curve[0].wear == pi.p[0]);
    CHECK(curve[1].wear == 1.0);
    CHECK(curve[2].wear == pi.p[16]);

    // Unimodal: rising up to the mean, falling after it.
    std::vector<double> fine;
    for (int i = 1; i < 40; ++i) fine.push_back(16.0 * i / 40.0);
    const std::vector<KktSolution> dense = tradeoff_curve(pi, fine);
    for (size_t i = 1; i < dense.size(); ++i) {
        if (dense[i].cost <= mean)
            CHECK(dense[i].wear >= dense[i - 1].wear - 1e-12);
        else
            CHECK(dense[i].wear <= dense[i - 1].wear + 1e-12);
    }
}

TEST_CASE("rga operating points stay on or below the optimal curve") {
    const OccupancyVector pi = binomial_fixed_point(64);
    for (int d = 1; d <= 100; ++d) {
        const TradeoffPoint pt = rga_point(pi, static_cast<double>(d));
        const KktSolution best = optimal_wear_leveling(pi, pt.cost);
        CHECK(pt.wear <= best.wear + 1e-9);
    }
}

TEST_CASE("rga cost and wear are nonincreasing in d") {
    for (const OccupancyVector& pi :
         {binomial_fixed_point(64), truncated_normal_pi(64, 20.0, 10.0)}) {
        TradeoffPoint prev = rga_point(pi, 1.0);
        for (int d = 2; d <= 100; ++d) {
            const TradeoffPoint pt = rga_point(pi, static_cast<double>(d));
            CHECK(pt.cost <= prev.cost + 1e-12);
            CHECK(pt.wear <= prev.wear + 1e-12);
            prev = pt;
        }
    }
}

TEST_CASE("curve CSV format") {
    const OccupancyVector pi = binomial_fixed_point(4);
    const double grid[] = {0.0, 1.0};
    const std::vector<KktSolution> curve = tradeoff_curve(pi, grid);
    std::ostringstream out;
    write_curve_csv(out, curve);
    CHECK(out.str().rfind("c_star,w_star,regime,breakpoint\n", 0) == 0);
    CHECK(out.str().find("cost_zero") != std::string::npos);
}
