#pragma once

#include <functional>
#include <vector>

#include "auctionkit/common.hpp"

namespace auctionkit {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 48;
    // panel count for the first-order Riemann-sum cross-check mode
    int fallback_panels = 65536;

    void validate() const;
};

struct RootSpec {
    double lo = 0.0;
    double hi = 1.0;
    double tol = 1e-10;
    int max_iter = 200;

    void validate() const;
};

// Adaptive Simpson integral of f over [a, b]. Integrable endpoint
// singularities are handled by nudging the endpoint evaluation inward
// (open-rule treatment); a non-finite interior value or failure to meet
// tolerance at max_depth raises QuadratureError with the best estimate.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Right-endpoint Riemann sum with n panels; first-order, kept as an
// independent cross-check of the adaptive rule.
double integrate_riemann(const std::function<double(double)>& f, double a, double b, int panels);

// Bracketed root of f on [spec.lo, spec.hi]: secant steps accepted while
// they stay inside the bracket, bisection otherwise, so convergence is
// guaranteed. Requires f(lo) * f(hi) <= 0.
double find_root(const std::function<double(double)>& f, const RootSpec& spec);

using OdeState = std::vector<double>;
using OdeRhs = std::function<OdeState(double, const OdeState&)>;

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<OdeState> y;
};

// One classical Runge-Kutta step of size h.
OdeState rk4_step(const OdeRhs& rhs, double t, const OdeState& y, double h);

// Fixed-step RK4 from `from` to `to` (either direction); the trajectory
// includes both endpoints. A non-finite rhs value raises NumericalError
// reporting the offending abscissa.
OdeTrajectory integrate_ode(const OdeRhs& rhs, double from, double to,
                            const OdeState& initial, int steps);

}  // namespace auctionkit
