#include "dcesim/integrator.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include <cmath>
#include <limits>

#include "dcesim/errors.hpp"

namespace dcesim {

namespace {

const gsl_odeiv2_step_type* step_type(Stepper s) {
    switch (s) {
        case Stepper::rkf45: return gsl_odeiv2_step_rkf45;
        case Stepper::rk8pd: return gsl_odeiv2_step_rk8pd;
    }
    return gsl_odeiv2_step_rk8pd;
}

// GSL's default handler aborts; errors are reported through return codes.
struct GslHandlerGuard {
    GslHandlerGuard() { gsl_set_error_handler_off(); }
};
const GslHandlerGuard gsl_handler_guard;

}  // namespace

struct AdaptiveIntegrator::Impl {
    gsl_odeiv2_step* step = nullptr;
    gsl_odeiv2_control* control = nullptr;
    gsl_odeiv2_evolve* evolve = nullptr;
    gsl_odeiv2_system system{};

    ~Impl() {
        if (evolve) gsl_odeiv2_evolve_free(evolve);
        if (control) gsl_odeiv2_control_free(control);
        if (step) gsl_odeiv2_step_free(step);
    }
};

AdaptiveIntegrator::AdaptiveIntegrator(std::size_t dim, Stepper stepper, double err, Rhs rhs,
                                       int column)
    : impl_(std::make_unique<Impl>()), rhs_(std::move(rhs)), column_(column), h_(0.0) {
    impl_->step = gsl_odeiv2_step_alloc(step_type(stepper), dim);
    impl_->control = gsl_odeiv2_control_y_new(err, err);
    impl_->evolve = gsl_odeiv2_evolve_alloc(dim);
    if (!impl_->step || !impl_->control || !impl_->evolve)
        throw IntegrationFailure("failed to allocate GSL integrator", column, 0.0);
    impl_->system = gsl_odeiv2_system{&AdaptiveIntegrator::gsl_rhs, nullptr, dim, this};
}

AdaptiveIntegrator::~AdaptiveIntegrator() = default;

int AdaptiveIntegrator::gsl_rhs(double t, const double y[], double dydt[], void* self) {
    auto* me = static_cast<AdaptiveIntegrator*>(self);
    const std::size_t n = me->impl_->system.dimension;
    ++me->stats_.evaluations;
    me->rhs_(t, std::span<const double>(y, n), std::span<double>(dydt, n));
    return GSL_SUCCESS;
}

void AdaptiveIntegrator::advance(double& t, double t_target, std::span<double> y) {
    if (t_target <= t) return;
    if (h_ <= 0.0) h_ = std::min(1e-3, t_target - t);

    gsl_odeiv2_evolve* ev = impl_->evolve;
    const auto failed_before = ev->failed_steps;
    const auto count_before = ev->count;

    while (t < t_target) {
        const bool final_step = t + h_ >= t_target;
        double h = h_;
        const int status = gsl_odeiv2_evolve_apply(ev, impl_->control, impl_->step,
                                                   &impl_->system, &t, t_target, &h, y.data());
        if (status != GSL_SUCCESS)
            throw IntegrationFailure("step size underflow: requested tolerance not reachable",
                                     column_, t);
        if (!(std::abs(h) > 1e-15 * std::max(1.0, std::abs(t))))
            throw IntegrationFailure("step size underflow", column_, t);
        // Keep the unclamped step; a final clamped step only shortens h.
        if (!final_step || h < h_) h_ = h;
    }

    stats_.accepted += static_cast<long>(ev->count - count_before);
    stats_.rejected += static_cast<long>(ev->failed_steps - failed_before);

    for (double v : y) {
        if (!std::isfinite(v)) throw IntegrationFailure("non-finite state", column_, t);
    }
}

}  // namespace dcesim
