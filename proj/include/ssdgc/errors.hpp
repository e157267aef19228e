#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ssdgc {

/// Birth-death model with a zero interior transition; names the offending rate.
class DegenerateModelError : public std::invalid_argument {
public:
    DegenerateModelError(const std::string& what, int state)
        : std::invalid_argument(what), state_(state) {}
    int state() const { return state_; }

private:
    int state_;
};

/// Occupancy entry is zero where a strictly positive distribution is required.
class ZeroProbabilityTypeError : public std::invalid_argument {
public:
    ZeroProbabilityTypeError(const std::string& what, int type)
        : std::invalid_argument(what), type_(type) {}
    int type() const { return type_; }

private:
    int type_;
};

/// ODE integration hit max_time before the drift residual fell below the
/// convergence threshold. Carries the last state for diagnosis.
class ConvergenceTimeout : public std::runtime_error {
public:
    ConvergenceTimeout(const std::string& what, std::vector<double> last_state,
                       double residual)
        : std::runtime_error(what),
          last_state_(std::move(last_state)),
          residual_(residual) {}
    const std::vector<double>& last_state() const { return last_state_; }
    double residual() const { return residual_; }

private:
    std::vector<double> last_state_;
    double residual_;
};

/// GC could not find an eligible victim block.
class GcStarvationError : public std::runtime_error {
public:
    explicit GcStarvationError(const std::string& what) : std::runtime_error(what) {}
};

/// GC victim relocation could not fit into the available clean pages.
class GcDeadlockError : public std::runtime_error {
public:
    explicit GcDeadlockError(const std::string& what) : std::runtime_error(what) {}
};

/// Durability run exhausted its request budget before wearing out the device.
class InconclusiveRunError : public std::runtime_error {
public:
    InconclusiveRunError(const std::string& what, double progress)
        : std::runtime_error(what), progress_(progress) {}
    /// Fraction of the bad-block budget consumed when the generator ran dry.
    double progress() const { return progress_; }

private:
    double progress_;
};

}  // namespace ssdgc
