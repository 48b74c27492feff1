#pragma once

#include <functional>
#include <memory>
#include <span>

#include "dcesim/config.hpp"

namespace dcesim {

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;

    IntegrationStats& operator+=(const IntegrationStats& o) {
        accepted += o.accepted;
        rejected += o.rejected;
        evaluations += o.evaluations;
        return *this;
    }
};

/// Adaptive embedded Runge-Kutta driver for y' = f(t, y), backed by GSL's
/// odeiv2 steppers. Error control uses the same value for the absolute and
/// relative tolerance.
///
/// advance() always lands exactly on the requested target time; the step
/// size carried between calls is the last unclamped step, so segmenting the
/// integration at sample points does not shrink the step.
class AdaptiveIntegrator {
public:
    using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

    AdaptiveIntegrator(std::size_t dim, Stepper stepper, double err, Rhs rhs, int column = 0);
    ~AdaptiveIntegrator();
    AdaptiveIntegrator(const AdaptiveIntegrator&) = delete;
    AdaptiveIntegrator& operator=(const AdaptiveIntegrator&) = delete;

    /// Integrate y from t to t_target in place. Throws IntegrationFailure on
    /// step-size underflow or a non-finite state.
    void advance(double& t, double t_target, std::span<double> y);

    const IntegrationStats& stats() const { return stats_; }
    double step_size() const { return h_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Rhs rhs_;
    int column_;
    double h_;
    IntegrationStats stats_;

    static int gsl_rhs(double t, const double y[], double dydt[], void* self);
};

}  // namespace dcesim
