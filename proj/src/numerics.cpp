#include "auctionkit/numerics.hpp"

#include <cmath>
#include <sstream>

namespace auctionkit {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (max_depth < 1) throw std::invalid_argument("quadrature max_depth must be >= 1");
    if (fallback_panels < 64) throw std::invalid_argument("fallback_panels must be >= 64");
}

void RootSpec::validate() const {
    if (!(lo < hi)) throw std::invalid_argument("root bracket needs lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("root tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("root max_iter must be >= 1");
}

namespace {

// Evaluate f, falling back to a point nudged just inside the interval when
// an endpoint is singular (open-rule treatment). Interior non-finite
// values are the caller's problem.
double eval_open(const std::function<double(double)>& f, double x, double a, double b) {
    double v = f(x);
    if (std::isfinite(v)) return v;
    double nudge = 1e-12 * (std::fabs(b - a) + std::fabs(a) + 1.0);
    if (x == a) return f(a < b ? a + nudge : a - nudge);
    if (x == b) return f(a < b ? b - nudge : b + nudge);
    return v;
}

struct SimpsonResult {
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
};

// Standard adaptive Simpson with a depth cap. On depth exhaustion the best
// estimate is kept and the failure recorded, so the top level can report a
// useful error bound.
SimpsonResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth, int max_depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm)) {
        std::ostringstream msg;
        msg << "integrand not finite at x = " << (std::isfinite(flm) ? rm : lm);
        throw NumericalError(msg.str());
    }
    double h6 = (b - a) / 12.0;
    double left = h6 * (fa + 4.0 * flm + fm);
    double right = h6 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol || b - a == 0.0)
        return {left + right + delta / 15.0, std::fabs(delta) / 15.0, true};
    if (depth >= max_depth)
        return {left + right, std::fabs(delta), false};
    SimpsonResult l = adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth);
    SimpsonResult r = adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
    return {l.value + r.value, l.err + r.err, l.converged && r.converged};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, spec);

    double fa = eval_open(f, a, a, b);
    double fb = eval_open(f, b, a, b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
        throw NumericalError("integrand not finite on the integration interval");

    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(whole));
    SimpsonResult res = adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 0, spec.max_depth);
    if (!res.converged) {
        double target = std::max(spec.abs_tol, spec.rel_tol * std::fabs(res.value));
        if (res.err > target) {
            std::ostringstream msg;
            msg << "quadrature failed to converge at depth " << spec.max_depth
                << " (estimate " << res.value << ", error bound " << res.err << ")";
            throw QuadratureError(msg.str(), res.value, res.err);
        }
    }
    return res.value;
}

double integrate_riemann(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("riemann panels must be >= 1");
    if (a == b) return 0.0;
    double dy = (b - a) / panels;
    double sum = 0.0;
    double comp = 0.0;  // Kahan compensation; a million panels lose digits otherwise
    for (int k = 1; k <= panels; ++k) {
        double term = f(a + k * dy) * dy;
        double t = sum + term;
        comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double find_root(const std::function<double(double)>& f, const RootSpec& spec) {
    spec.validate();
    double a = spec.lo, b = spec.hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) {
        std::ostringstream msg;
        msg << "no sign change on bracket: f(" << a << ") = " << fa << ", f(" << b
            << ") = " << fb;
        throw BracketError(msg.str(), fa, fb);
    }

    for (int it = 0; it < spec.max_iter; ++it) {
        // secant candidate, taken only when it falls inside the bracket
        double x = b - fb * (b - a) / (fb - fa);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
        double fx = f(x);
        if (std::fabs(fx) <= spec.tol || b - a <= spec.tol) return x;
        if (fa * fx < 0.0) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    return 0.5 * (a + b);
}

OdeState rk4_step(const OdeRhs& rhs, double t, const OdeState& y, double h) {
    const std::size_t n = y.size();
    OdeState k1 = rhs(t, y);
    OdeState tmp(n);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    OdeState k2 = rhs(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    OdeState k3 = rhs(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    OdeState k4 = rhs(t + h, tmp);
    OdeState out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

OdeTrajectory integrate_ode(const OdeRhs& rhs, double from, double to, const OdeState& initial,
                            int steps) {
    if (steps < 16) throw std::invalid_argument("integrate_ode needs steps >= 16");

    auto checked_rhs = [&](double t, const OdeState& y) {
        OdeState d = rhs(t, y);
        for (double v : d) {
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "ode right-hand side not finite at t = " << t;
                throw NumericalError(msg.str());
            }
        }
        return d;
    };

    OdeTrajectory traj;
    traj.t.reserve(steps + 1);
    traj.y.reserve(steps + 1);
    traj.t.push_back(from);
    traj.y.push_back(initial);

    double h = (to - from) / steps;
    OdeState y = initial;
    for (int i = 0; i < steps; ++i) {
        double t = from + i * h;
        y = rk4_step(checked_rhs, t, y, h);
        traj.t.push_back(i + 1 == steps ? to : t + h);
        traj.y.push_back(y);
    }
    return traj;
}

}  // namespace auctionkit
