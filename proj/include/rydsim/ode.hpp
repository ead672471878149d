#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "rydsim/error.hpp"

namespace rydsim::ode {

struct Tolerance {
    double relative = 1e-8;
    double absolute = 1e-10;
};

struct AdaptiveOptions {
    Tolerance tol{};
    double initial_step = 0.0;  // 0 picks a step from the interval length
    double max_step = 0.0;      // 0 means unlimited
    std::size_t max_steps = 50'000'000;
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

template <class Vector>
double scaled_error(const Vector& err, const Vector& y0, const Vector& y1, const Tolerance& tol) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = tol.absolute + tol.relative * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / scale);
    }
    return worst;
}

}  // namespace detail

// Dormand-Prince 5(4) with FSAL and a standard PI-free step controller.
// rhs(t, y) returns dy/dt; Vector is any Eigen column vector.
template <class Vector, class Rhs>
Vector integrate_adaptive(Rhs&& rhs, Vector y, double t0, double t1, const AdaptiveOptions& opt = {},
                          StepStats* stats = nullptr) {
    if (!(t1 >= t0)) throw DomainError("integrate_adaptive: end time precedes start time");
    if (t1 == t0) return y;

    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = t1 - t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : span / 100.0;
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    double t = t0;
    Vector k1 = rhs(t, y);
    StepStats local{};

    while (t < t1) {
        if (local.accepted + local.rejected >= opt.max_steps)
            throw IntegrationError("step budget exhausted", t);
        const bool last = t + h >= t1;
        if (last) h = t1 - t;

        const Vector k2 = rhs(t + c2 * h, Vector(y + h * a21 * k1));
        const Vector k3 = rhs(t + c3 * h, Vector(y + h * (a31 * k1 + a32 * k2)));
        const Vector k4 = rhs(t + c4 * h, Vector(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vector k5 = rhs(t + c5 * h, Vector(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vector k6 = rhs(t + h, Vector(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const Vector y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = rhs(t + h, y_new);
        const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double norm = detail::scaled_error(err, y, y_new, opt.tol);
        if (!std::isfinite(norm)) throw IntegrationError("non-finite state during integration", t);

        if (norm <= 1.0) {
            t = last ? t1 : t + h;
            y = y_new;
            k1 = k7;
            ++local.accepted;
        } else {
            ++local.rejected;
        }
        const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        h *= norm <= 1.0 ? factor : std::min(factor, 1.0);
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegrationError("step size underflow", t);
    }
    if (stats) *stats = local;
    return y;
}

// Classical fourth-order Runge-Kutta with a fixed number of steps.
template <class Vector, class Rhs>
Vector integrate_fixed(Rhs&& rhs, Vector y, double t0, double t1, std::size_t steps) {
    if (steps == 0) throw DomainError("integrate_fixed: at least one step is required");
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = t0 + h * static_cast<double>(n);
        const Vector k1 = rhs(t, y);
        const Vector k2 = rhs(t + 0.5 * h, Vector(y + 0.5 * h * k1));
        const Vector k3 = rhs(t + 0.5 * h, Vector(y + 0.5 * h * k2));
        const Vector k4 = rhs(t + h, Vector(y + h * k3));
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

}  // namespace rydsim::ode
