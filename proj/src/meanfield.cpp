#include "ssdgc/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "ssdgc/errors.hpp"

namespace ssdgc {

void OdeConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("ode config: dt must be > 0");
    if (!(convergence_eps > 0.0))
        throw std::invalid_argument("ode config: convergence_eps must be > 0");
    if (!(max_time > dt)) throw std::invalid_argument("ode config: max_time must exceed dt");
}

OdeConfig default_ode_config(const TransitionModel& model) {
    OdeConfig cfg;
    cfg.dt = 0.1 / model.lambda;
    // Chains with a low-flux interior edge equilibrate across it slowly, so
    // the budget is generous; convergence usually lands much earlier.
    cfg.max_time = 40000.0 * std::max(1, model.k()) / model.lambda;
    cfg.convergence_eps = 1e-11 * model.lambda;
    return cfg;
}

static void drift_into(std::span<const double> s, const TransitionModel& m,
                       std::span<double> out) {
    const int k = m.k();
    for (int i = 0; i <= k; ++i) {
        double d = -(m.down[i] + m.up[i]) * s[i];
        if (i > 0) d += m.up[i - 1] * s[i - 1];
        if (i < k) d += m.down[i + 1] * s[i + 1];
        out[i] = m.lambda * d;
    }
}

std::vector<double> occupancy_drift(const OccupancyVector& s, const TransitionModel& model) {
    model.validate();
    s.validate();
    if (s.p.size() != model.up.size())
        throw std::invalid_argument("occupancy_drift: occupancy and model dimensions differ");
    std::vector<double> out(s.p.size());
    drift_into(s.p, model, out);
    return out;
}

IntegrationResult integrate_to_steady_state(const OccupancyVector& s0,
                                            const TransitionModel& model,
                                            const OdeConfig& cfg) {
    cfg.validate();
    model.validate();
    s0.validate();
    if (s0.p.size() != model.up.size())
        throw std::invalid_argument("integrate_to_steady_state: dimension mismatch");

    const size_t n = s0.p.size();
    const uint64_t planned_steps =
        static_cast<uint64_t>(std::ceil(cfg.max_time / cfg.dt));
    const uint64_t sample_stride = std::max<uint64_t>(1, planned_steps / 1000);
    const double clip_floor = -10.0 * cfg.dt * model.lambda;

    std::vector<double> s = s0.p;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    IntegrationResult res;
    res.trajectory.push_back({0.0, s});

    double t = 0.0;
    uint64_t step = 0;
    double residual = 0.0;
    while (true) {
        drift_into(s, model, k1);
        residual = 0.0;
        for (double v : k1) residual = std::max(residual, std::abs(v));
        if (residual < cfg.convergence_eps) break;
        if (t >= cfg.max_time)
            throw ConvergenceTimeout("integrate_to_steady_state: no steady state by t=" +
                                         std::to_string(cfg.max_time) + " (residual " +
                                         std::to_string(residual) + ")",
                                     s, residual);

        const double h = cfg.dt;
        for (size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
        drift_into(tmp, model, k2);
        for (size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
        drift_into(tmp, model, k3);
        for (size_t i = 0; i < n; ++i) tmp[i] = s[i] + h * k3[i];
        drift_into(tmp, model, k4);
        for (size_t i = 0; i < n; ++i)
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        bool clipped = false;
        for (size_t i = 0; i < n; ++i) {
            if (s[i] < 0.0) {
                if (s[i] < clip_floor)
                    throw std::runtime_error(
                        "integrate_to_steady_state: entry fell below the clip floor; "
                        "step size too large for this model");
                s[i] = 0.0;
                clipped = true;
            }
        }
        if (clipped) {
            ++res.clip_events;
            double sum = 0.0;
            for (double v : s) sum += v;
            for (double& v : s) v /= sum;
        }

        t += h;
        ++step;
        if (step % sample_stride == 0) res.trajectory.push_back({t, s});
    }

    double sum = 0.0;
    for (double v : s) sum += v;
    for (double& v : s) v /= sum;
    if (res.trajectory.back().t != t) res.trajectory.push_back({t, s});

    res.steady.p = std::move(s);
    res.residual = residual;
    res.elapsed = t;
    res.steps = step;
    return res;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory) {
    if (trajectory.empty()) return;
    out << "t";
    for (size_t i = 0; i < trajectory.front().s.size(); ++i) out << ",s_" << i;
    out << "\n";
    char buf[32];
    for (const auto& sample : trajectory) {
        std::snprintf(buf, sizeof buf, "%.12g", sample.t);
        out << buf;
        for (double v : sample.s) {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            out << ',' << buf;
        }
        out << "\n";
    }
}

TransitionEstimator::TransitionEstimator(int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("transition estimator: k must be >= 1");
    populated_.assign(static_cast<size_t>(k) + 1, 0);
    up_sum_.assign(static_cast<size_t>(k) + 1, 0.0);
    down_sum_.assign(static_cast<size_t>(k) + 1, 0.0);
    up_scaled_.assign(static_cast<size_t>(k) + 1, 0.0);
    down_scaled_.assign(static_cast<size_t>(k) + 1, 0.0);
}

void TransitionEstimator::on_request(std::span<const uint32_t> state_counts,
                                     std::span<const BlockMove> moves) {
    if (state_counts.size() != static_cast<size_t>(k_) + 1)
        throw std::invalid_argument("transition estimator: state count vector has wrong length");
    uint64_t blocks = 0;
    for (int i = 0; i <= k_; ++i) {
        blocks += state_counts[i];
        if (state_counts[i] > 0) ++populated_[i];
    }
    for (const BlockMove& move : moves) {
        if (move.from < 0 || move.from > k_ || move.to < 0 || move.to > k_ ||
            std::abs(move.to - move.from) != 1)
            throw std::invalid_argument("transition estimator: transition must move one step");
        if (state_counts[move.from] == 0)
            throw std::invalid_argument("transition estimator: transition from an empty state");
        const double contribution = 1.0 / state_counts[move.from];
        if (move.to == move.from + 1) {
            up_sum_[move.from] += contribution;
            up_scaled_[move.from] += contribution * static_cast<double>(blocks);
        } else {
            down_sum_[move.from] += contribution;
            down_scaled_[move.from] += contribution * static_cast<double>(blocks);
        }
    }
    ++requests_;
}

void TransitionEstimator::record(const TransitionObservation& obs) {
    on_request(obs.state_counts, obs.moves);
}

TransitionModel TransitionEstimator::estimate(double lambda) const {
    if (requests_ == 0)
        throw std::invalid_argument("transition estimator: empty observation stream");
    TransitionModel m;
    m.lambda = lambda;
    m.up.assign(static_cast<size_t>(k_) + 1, 0.0);
    m.down.assign(static_cast<size_t>(k_) + 1, 0.0);
    for (int i = 0; i <= k_; ++i) {
        if (populated_[i] == 0) continue;
        m.up[i] = up_scaled_[i] / populated_[i];
        m.down[i] = down_scaled_[i] / populated_[i];
    }
    m.up[k_] = 0.0;
    m.down[0] = 0.0;
    return m;
}

double TransitionEstimator::raw_ratio_average(int state, bool up) const {
    if (state < 0 || state > k_)
        throw std::invalid_argument("transition estimator: state out of range");
    if (populated_[state] == 0) return 0.0;
    return (up ? up_sum_[state] : down_sum_[state]) / populated_[state];
}

std::vector<bool> TransitionEstimator::unobserved_states() const {
    std::vector<bool> flags(static_cast<size_t>(k_) + 1);
    for (int i = 0; i <= k_; ++i) flags[i] = populated_[i] == 0;
    return flags;
}

}  // namespace ssdgc
