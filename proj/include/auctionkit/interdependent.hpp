#pragma once

#include "auctionkit/bidder_count.hpp"
#include "auctionkit/common.hpp"
#include "auctionkit/numerics.hpp"

namespace auctionkit {

// Affiliated interdependent values: each bidder's signal is S + Z with S, Z
// independent U[0,1] (so signals follow the Irwin-Hall-2 distribution on
// [0,2]), and the item value is v(x, y) = alpha*x + xi*y where y is the
// highest rival signal.
struct InterdepSpec {
    int bidders = 2;
    double alpha = 0.5;
    double xi = 0.5;
    double reserve = 0.0;

    void validate() const;
};

// Reverse hazard rate rho(t) = g(t|t)/G(t|t) of the highest rival signal:
//   (M-1) * 2/t            for 0 < t < 1
//   (M-1) * (2-t)/F~(t)    for 1 <= t <= 2,  F~(t) = 2t - 1 - t^2/2.
// Continuous at the knot t = 1 (both branches give 2(M-1)).
double reverse_hazard(int bidders, double t);

// Weighting kernel L(y|x) for 0 <= y <= x <= 2, the piecewise closed form
// of exp(-int_y^x rho): y^{2M-2}/x^{2M-2} below the knot y = 1 and
// [F~(y)/F~(x)]^{M-1} above it. The branch is chosen by y alone, matching
// the closed-form bid below; across the knot this differs from the exact
// exponential by the factor (2 F~(x)/x^2)^{M-1}.
double L_weight(int bidders, double y, double x);

// int_1^x F~(y)^n dy by adaptive quadrature (the default evaluation) and
// by the quadratic-power reduction formula with a=-1/2, b=2, c=-1; the two
// must agree to 1e-9.
double irwin_hall_power_integral(int n, double x, const QuadratureSpec& quad = {});
double irwin_hall_power_integral_reduction(int n, double x);

// No-reserve equilibrium bid: quadrature of int_0^x v(y,y) L(y|x) rho(y) dy.
BidResult bid_interdependent(const InterdepSpec& spec, double x, const QuadratureSpec& quad = {});

// Closed form of the same bid:
//   x < 1:  2(alpha+xi)(M-1) x / (2M-1)
//   x >= 1: 2(alpha+xi)(M-1) / ((2M-1) x^{2M-2})
//           + (alpha+xi) [x - (2^{1-M} + int_1^x F~^{M-1} dy) / F~(x)^{M-1}]
// continuous at the knot.
BidResult bid_irwinhall_closed(const InterdepSpec& spec, double x, const QuadratureSpec& quad = {});

// E[V1 | X1 = x, Y1 < x]: the expected item value conditional on winning
// at signal x. Increasing in x, with maximum 2*alpha + (5/6)*xi at x = 2.
double conditional_winning_value(const InterdepSpec& spec, double x,
                                 const QuadratureSpec& quad = {});

// Screening level x*(r) = inf{x : E[V1 | X1 = x, Y1 < x] >= r}; throws
// std::invalid_argument naming the achievable range when r lies outside it.
double x_star(const InterdepSpec& spec, const QuadratureSpec& quad = {});

// Reserve-price bid for x >= x*(r):
//   beta(x) = r L(x*|x) + int_{x*}^x v(y,y) rho(y) L(y|x) dy,
// so beta(x*) = r exactly. x < x* throws ("below screening level").
BidResult bid_combined(const InterdepSpec& spec, double x, const QuadratureSpec& quad = {});

// Bidder-count-uncertain version: mixture of per-count combined bids
// weighted by p_l F(x)^l over the counts whose screening level admits x
// (weights renormalized over those counts); bid 0 when every count
// screens x out.
BidResult bid_combined_uncertain(const BidderCountPMF& pmf, const InterdepSpec& spec, double x,
                                 const QuadratureSpec& quad = {});

}  // namespace auctionkit
