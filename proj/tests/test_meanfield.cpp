#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ssdgc/errors.hpp"
#include "ssdgc/meanfield.hpp"
#include "ssdgc/model.hpp"
#include "support/oracles.hpp"

using namespace ssdgc;

namespace {

TransitionModel random_irreducible(int k, std::mt19937_64& rng) {
    TransitionModel m;
    m.lambda = 1.0;
    m.up.assign(k + 1, 0.0);
    m.down.assign(k + 1, 0.0);
    for (int i = 0; i < k; ++i)
        m.up[i] = 0.1 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    for (int i = 1; i <= k; ++i)
        m.down[i] = 0.1 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    return m;
}

}  // namespace

TEST_CASE("drift vanishes at the fixed point") {
    for (int k : {2, 4, 16}) {
        const OccupancyVector pi = binomial_fixed_point(k);
        const std::vector<double> d = occupancy_drift(pi, uniform_transition_model(k, 1.0));
        for (double v : d) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("drift hand cases") {
    TransitionModel two_state;
    two_state.lambda = 1.0;
    two_state.up = {1.0, 0.0};
    two_state.down = {0.0, 1.0};
    const std::vector<double> d1 = occupancy_drift(OccupancyVector{{1.0, 0.0}}, two_state);
    CHECK(d1[0] == doctest::Approx(-1.0));
    CHECK(d1[1] == doctest::Approx(1.0));

    const std::vector<double> d2 =
        occupancy_drift(OccupancyVector{{1.0, 0.0, 0.0}}, uniform_transition_model(2, 1.0));
    CHECK(d2[0] == doctest::Approx(-1.0));
    CHECK(d2[1] == doctest::Approx(1.0));
    CHECK(d2[2] == doctest::Approx(0.0));
}

TEST_CASE("drift conserves probability mass for arbitrary states") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 12);
        const TransitionModel m = random_irreducible(k, rng);
        OccupancyVector s;
        s.p.assign(k + 1, 0.0);
        double sum = 0.0;
        for (double& v : s.p) {
            v = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-6;
            sum += v;
        }
        for (double& v : s.p) v /= sum;
        const std::vector<double> d = occupancy_drift(s, m);
        double total = 0.0;
        for (double v : d) total += v;
        CHECK(std::abs(total) < 1e-12);
    }
}

TEST_CASE("drift rejects dimension mismatch") {
    CHECK_THROWS_AS(
        occupancy_drift(OccupancyVector{{0.5, 0.5}}, uniform_transition_model(2, 1.0)),
        std::invalid_argument);
}

TEST_CASE("integration reaches the binomial fixed point from a corner") {
    const int k = 4;
    OccupancyVector s0;
    s0.p.assign(k + 1, 0.0);
    s0.p[0] = 1.0;
    const TransitionModel m = uniform_transition_model(k, 1.0);
    const IntegrationResult res = integrate_to_steady_state(s0, m, default_ode_config(m));
    CHECK(oracle::l1_distance(res.steady.p, binomial_fixed_point(k).p) < 1e-6);
    CHECK(res.residual < default_ode_config(m).convergence_eps);
    CHECK(res.trajectory.size() >= 2);
}

TEST_CASE("integration agrees with the closed form for general models") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 6);
        const TransitionModel m = random_irreducible(k, rng);
        OccupancyVector s0;
        s0.p.assign(k + 1, 1.0 / (k + 1));
        const IntegrationResult res = integrate_to_steady_state(s0, m, default_ode_config(m));
        CHECK(oracle::l1_distance(res.steady.p, general_fixed_point(m).p) < 1e-6);
    }
}

TEST_CASE("integration from the fixed point stays put") {
    const int k = 8;
    const TransitionModel m = uniform_transition_model(k, 1.0);
    const OccupancyVector pi = binomial_fixed_point(k);
    const IntegrationResult res = integrate_to_steady_state(pi, m, default_ode_config(m));
    CHECK(res.steps == 0);
    CHECK(oracle::l1_distance(res.steady.p, pi.p) < 1e-9);
}

TEST_CASE("integration times out on an impossible tolerance") {
    const TransitionModel m = uniform_transition_model(4, 1.0);
    OccupancyVector s0;
    s0.p = {1.0, 0.0, 0.0, 0.0, 0.0};
    OdeConfig cfg{0.01, 0.05, 1e-18};
    try {
        integrate_to_steady_state(s0, m, cfg);
        FAIL("expected ConvergenceTimeout");
    } catch (const ConvergenceTimeout& e) {
        CHECK(e.residual() > 1e-18);
        CHECK(e.last_state().size() == 5);
    }
}

TEST_CASE("trajectory CSV shape") {
    const TransitionModel m = uniform_transition_model(2, 1.0);
    OccupancyVector s0;
    s0.p = {1.0, 0.0, 0.0};
    const IntegrationResult res = integrate_to_steady_state(s0, m, default_ode_config(m));
    std::ostringstream out;
    write_trajectory_csv(out, res.trajectory);
    const std::string text = out.str();
    CHECK(text.rfind("t,s_0,s_1,s_2\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') ==
          static_cast<long>(res.trajectory.size()) + 1);
}

TEST_CASE("estimator single-observation ratio") {
    TransitionEstimator est(4);
    TransitionObservation obs;
    obs.state_counts = {0, 0, 0, 2, 1};
    obs.moves = {{3, 4}};
    est.record(obs);
    // The request's ratio contribution is n_{3,4}/n_3 = 1/2.
    CHECK(est.raw_ratio_average(3, true) == doctest::Approx(0.5));
    CHECK(est.raw_ratio_average(3, false) == 0.0);
    const TransitionModel m = est.estimate();
    CHECK(m.up[3] == doctest::Approx(0.5 * 3.0));  // conditioned on the accessed block
    CHECK(m.down[3] == 0.0);
    const std::vector<bool> missing = est.unobserved_states();
    CHECK(missing[0]);
    CHECK(!missing[3]);
}

TEST_CASE("estimator with no transitions yields a zero model") {
    TransitionEstimator est(2);
    TransitionObservation obs;
    obs.state_counts = {3, 2, 1};
    for (int i = 0; i < 10; ++i) est.record(obs);
    const TransitionModel m = est.estimate();
    for (double v : m.up) CHECK(v == 0.0);
    for (double v : m.down) CHECK(v == 0.0);
}

TEST_CASE("estimator rejects an empty stream") {
    TransitionEstimator est(2);
    CHECK_THROWS_AS(est.estimate(), std::invalid_argument);
}

TEST_CASE("estimator recovers a known uniform model from a sampled chain") {
    const int k = 6;
    const TransitionModel truth = uniform_transition_model(k, 1.0);
    TransitionEstimator est(k);
    oracle::feed_synthetic_chain(est, truth, 1000, 20000, 400000, 99);
    const TransitionModel fitted = est.estimate();

    // States holding at least ~1% of the blocks in the binomial steady state.
    const OccupancyVector pi = binomial_fixed_point(k);
    for (int i = 0; i <= k; ++i) {
        if (pi.p[i] < 0.01) continue;
        CHECK(std::abs(fitted.up[i] - truth.up[i]) < 0.02);
        CHECK(std::abs(fitted.down[i] - truth.down[i]) < 0.02);
    }
}

TEST_CASE("estimator consistency on a lopsided general model") {
    const int k = 5;
    std::mt19937_64 rng(5);
    TransitionModel truth;
    truth.lambda = 1.0;
    truth.up = {0.9, 0.7, 0.5, 0.3, 0.2, 0.0};
    truth.down = {0.0, 0.1, 0.2, 0.4, 0.6, 0.8};
    TransitionEstimator est(k);
    oracle::feed_synthetic_chain(est, truth, 2000, 40000, 200000, 12345);
    const TransitionModel fitted = est.estimate();
    const OccupancyVector pi = general_fixed_point(truth);
    for (int i = 0; i <= k; ++i) {
        if (pi.p[i] < 0.01) continue;
        CHECK(std::abs(fitted.up[i] - truth.up[i]) < 0.02);
        CHECK(std::abs(fitted.down[i] - truth.down[i]) < 0.02);
    }
}
