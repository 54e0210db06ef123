#include "auctionkit/interdependent.hpp"

#include <cmath>
#include <sstream>

#include "auctionkit/distributions.hpp"

namespace auctionkit {

namespace {

// F~(t) = 2t - 1 - t^2/2, the upper branch of the Irwin-Hall-2 CDF;
// F~(1) = 1/2, F~(2) = 1.
double upper_cdf(double t) {
    return 2.0 * t - 1.0 - 0.5 * t * t;
}

double clamp_knot_domain(double x, const char* what) {
    if (x < 0.0 || x > 2.0) {
        std::ostringstream msg;
        msg << what << ": signal " << x << " outside [0, 2]";
        throw std::invalid_argument(msg.str());
    }
    return x;
}

}  // namespace

void InterdepSpec::validate() const {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (!(alpha >= 0.0 && alpha <= 1.0 && xi >= 0.0 && xi <= 1.0))
        throw std::invalid_argument("valuation weights must lie in [0, 1]");
    if (reserve < 0.0 || !std::isfinite(reserve))
        throw std::invalid_argument("reserve must be a finite nonnegative value");
}

double reverse_hazard(int bidders, double t) {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (!(t > 0.0)) throw std::invalid_argument("reverse hazard diverges at t <= 0");
    clamp_knot_domain(t, "reverse_hazard");
    double m1 = bidders - 1;
    if (t < 1.0) return m1 * 2.0 / t;
    return m1 * (2.0 - t) / upper_cdf(t);
}

double L_weight(int bidders, double y, double x) {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    clamp_knot_domain(x, "L_weight");
    if (y > x) throw std::invalid_argument("L_weight needs y <= x");
    if (y < 0.0) throw std::invalid_argument("L_weight needs y >= 0");
    if (y == x) return 1.0;
    int m1 = bidders - 1;
    if (y < 1.0) return std::pow(y, 2 * m1) / std::pow(x, 2 * m1);
    return std::pow(upper_cdf(y) / upper_cdf(x), m1);
}

double irwin_hall_power_integral(int n, double x, const QuadratureSpec& quad) {
    if (n < 0) throw std::invalid_argument("power integral needs n >= 0");
    clamp_knot_domain(x, "irwin_hall_power_integral");
    if (x < 1.0) throw std::invalid_argument("power integral starts at the knot y = 1");
    // evaluated tighter than the caller's spec so the 1e-9 agreement
    // check against the reduction formula stays meaningful
    QuadratureSpec tight = quad;
    tight.abs_tol = std::min(tight.abs_tol, 1e-12);
    tight.rel_tol = std::min(tight.rel_tol, 1e-11);
    return integrate([n](double y) { return std::pow(upper_cdf(y), n); }, 1.0, x, tight);
}

double irwin_hall_power_integral_reduction(int n, double x) {
    if (n < 0) throw std::invalid_argument("power integral needs n >= 0");
    clamp_knot_domain(x, "irwin_hall_power_integral_reduction");
    if (x < 1.0) throw std::invalid_argument("power integral starts at the knot y = 1");
    // I_n = [(2ax+b) Q^n - value at 1 + n (4ac - b^2) I_{n-1}] / ((4n+2) a)
    // with Q = ax^2 + bx + c, a = -1/2, b = 2, c = -1, so Q = F~ and
    // 4ac - b^2 = -2:
    //   I_n = [2^-n - (2-x) F~(x)^n] / (2n+1) + 2n/(2n+1) I_{n-1},
    // grounded at I_0 = x - 1.
    double I = x - 1.0;
    double Q = upper_cdf(x);
    for (int k = 1; k <= n; ++k) {
        I = (std::pow(0.5, k) - (2.0 - x) * std::pow(Q, k)) / (2.0 * k + 1.0) +
            2.0 * k / (2.0 * k + 1.0) * I;
    }
    return I;
}

BidResult bid_interdependent(const InterdepSpec& spec, double x, const QuadratureSpec& quad) {
    spec.validate();
    if (spec.reserve != 0.0)
        throw std::invalid_argument("bid_interdependent handles the no-reserve case; "
                                    "use bid_combined");
    clamp_knot_domain(x, "bid_interdependent");
    if (x == 0.0) return {0.0, BidMethod::quadrature, std::nullopt};

    const int M = spec.bidders;
    const double w = spec.alpha + spec.xi;
    const int m1 = M - 1;

    // v(y,y) rho(y) L(y|x), written per branch so the 1/y in rho cancels
    // analytically below the knot.
    auto low_part = [&](double y) {
        return 2.0 * w * m1 * std::pow(y, 2 * m1) / std::pow(x, 2 * m1);
    };
    auto high_part = [&](double y) {
        return w * y * m1 * (2.0 - y) * std::pow(upper_cdf(y), M - 2) /
               std::pow(upper_cdf(x), m1);
    };

    double bid;
    if (x <= 1.0) {
        bid = integrate(low_part, 0.0, x, quad);
    } else {
        bid = integrate(low_part, 0.0, 1.0, quad) + integrate(high_part, 1.0, x, quad);
    }
    return {bid, BidMethod::quadrature, std::nullopt};
}

BidResult bid_irwinhall_closed(const InterdepSpec& spec, double x, const QuadratureSpec& quad) {
    spec.validate();
    if (spec.reserve != 0.0)
        throw std::invalid_argument("bid_irwinhall_closed handles the no-reserve case");
    clamp_knot_domain(x, "bid_irwinhall_closed");

    const int M = spec.bidders;
    const double w = spec.alpha + spec.xi;
    const int m1 = M - 1;

    if (x < 1.0) {
        double bid = 2.0 * w * m1 * x / (2.0 * M - 1.0);
        return {bid, BidMethod::closed_form, std::nullopt};
    }

    double inner = irwin_hall_power_integral(m1, x, quad);
    double inner_reduction = irwin_hall_power_integral_reduction(m1, x);
    if (std::fabs(inner - inner_reduction) > 1e-9)
        throw NumericalError("power-integral quadrature and reduction formula disagree");

    double Fx = std::pow(upper_cdf(x), m1);
    double head = 2.0 * w * m1 / ((2.0 * M - 1.0) * std::pow(x, 2 * m1));
    double bid = head + w * (x - (std::pow(0.5, m1) + inner) / Fx);
    return {bid, BidMethod::closed_form, std::nullopt};
}

double conditional_winning_value(const InterdepSpec& spec, double x, const QuadratureSpec& quad) {
    spec.validate();
    clamp_knot_domain(x, "conditional_winning_value");

    const int M = spec.bidders;
    const int m1 = M - 1;
    if (x <= 1.0)
        return spec.alpha * x + 2.0 * spec.xi * m1 * x / (2.0 * M - 1.0);

    // E[Y | X = x, Y < x] over the conditional density of the highest
    // rival signal, split at the knot.
    double low = 2.0 / ((2.0 * M - 1.0) * std::pow(x, 2 * m1));
    double Fx = std::pow(upper_cdf(x), m1);
    auto high_part = [&](double y) {
        return y * std::pow(upper_cdf(y), M - 2) * (2.0 - y) / Fx;
    };
    double high = integrate(high_part, 1.0, x, quad);
    return spec.alpha * x + spec.xi * m1 * (low + high);
}

double x_star(const InterdepSpec& spec, const QuadratureSpec& quad) {
    spec.validate();
    if (!(spec.reserve > 0.0)) throw std::invalid_argument("x_star needs a positive reserve");

    const double eps = 1e-8;
    double top = conditional_winning_value(spec, 2.0 - eps, quad);
    if (spec.reserve > top) {
        std::ostringstream msg;
        msg << "reserve " << spec.reserve << " exceeds the achievable conditional value range "
            << "(0, " << top << "]";
        throw std::invalid_argument(msg.str());
    }

    // Below the knot the conditional value is exactly linear,
    // E(x) = [alpha + 2 xi (M-1)/(2M-1)] x, so invert it directly and
    // only root-find on the upper branch.
    double slope = spec.alpha + 2.0 * spec.xi * (spec.bidders - 1) / (2.0 * spec.bidders - 1.0);
    if (spec.reserve <= slope) return spec.reserve / slope;

    auto gap = [&](double x) { return conditional_winning_value(spec, x, quad) - spec.reserve; };
    RootSpec root;
    root.lo = 1.0;
    root.hi = 2.0 - eps;
    root.tol = 1e-12;
    return find_root(gap, root);
}

BidResult bid_combined(const InterdepSpec& spec, double x, const QuadratureSpec& quad) {
    spec.validate();
    if (!(spec.reserve > 0.0))
        throw std::invalid_argument("bid_combined needs a positive reserve");
    clamp_knot_domain(x, "bid_combined");

    double screen = x_star(spec, quad);
    // comparisons against the computed screening level get a few ulps of
    // slack so that x = x*(r) itself is always bid-eligible
    double slack = 1e-12 * (1.0 + screen);
    if (x < screen - slack) throw std::invalid_argument("below screening level: no bid");
    if (x <= screen + slack) return {spec.reserve, BidMethod::quadrature, std::nullopt};

    const int M = spec.bidders;
    const double w = spec.alpha + spec.xi;
    const int m1 = M - 1;

    auto low_part = [&](double y) {
        return 2.0 * w * m1 * std::pow(y, 2 * m1) / std::pow(x, 2 * m1);
    };
    auto high_part = [&](double y) {
        return w * y * m1 * (2.0 - y) * std::pow(upper_cdf(y), M - 2) /
               std::pow(upper_cdf(x), m1);
    };

    double carried = spec.reserve * L_weight(M, screen, x);
    double accumulated;
    if (x <= 1.0) {
        accumulated = integrate(low_part, screen, x, quad);
    } else if (screen >= 1.0) {
        accumulated = integrate(high_part, screen, x, quad);
    } else {
        accumulated = integrate(low_part, screen, 1.0, quad) + integrate(high_part, 1.0, x, quad);
    }
    return {carried + accumulated, BidMethod::quadrature, std::nullopt};
}

BidResult bid_combined_uncertain(const BidderCountPMF& pmf, const InterdepSpec& spec, double x,
                                 const QuadratureSpec& quad) {
    pmf.validate();
    spec.validate();
    if (!(spec.reserve > 0.0))
        throw std::invalid_argument("bid_combined_uncertain needs a positive reserve");
    clamp_knot_domain(x, "bid_combined_uncertain");

    auto signal_dist = ValuationDistribution::irwin_hall2();
    double F = signal_dist.cdf(x);

    // Mixture over rival counts l that still admit a bid at x; weights
    // p_l F^l renormalized over those counts.
    double G = 0.0;
    double weighted = 0.0;
    double Fl = 1.0;
    for (int l = 0; l < pmf.max_bidders; ++l, Fl *= F) {
        if (pmf.p[l] == 0.0) continue;
        double weight = pmf.p[l] * Fl;
        if (weight == 0.0) continue;
        double bid_l;
        if (l == 0) {
            // No rival: the conditional value is just alpha*x, and the
            // only sensible bid is the reserve itself.
            if (spec.alpha * x < spec.reserve) continue;
            bid_l = spec.reserve;
        } else {
            InterdepSpec per_count = spec;
            per_count.bidders = l + 1;
            // a count whose conditional value never reaches the reserve is
            // screened out at every signal
            if (conditional_winning_value(per_count, 2.0 - 1e-8, quad) < spec.reserve) continue;
            double screen = x_star(per_count, quad);
            if (x < screen - 1e-12 * (1.0 + screen)) continue;
            bid_l = bid_combined(per_count, x, quad).bid;
        }
        G += weight;
        weighted += weight * bid_l;
    }
    if (G <= 0.0) return {0.0, BidMethod::quadrature, std::nullopt};
    return {weighted / G, BidMethod::quadrature, std::nullopt};
}

}  // namespace auctionkit
