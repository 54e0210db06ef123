#pragma once

#include <optional>

#include "auctionkit/common.hpp"
#include "auctionkit/distributions.hpp"
#include "auctionkit/numerics.hpp"

namespace auctionkit {

// Symmetric independent-private-value auction: M bidders drawing from
// `dist`, optional reserve price r (0 = none), seller's own valuation x_s.
struct AuctionSpec {
    int bidders = 2;
    ValuationDistribution dist = ValuationDistribution::uniform(1.0);
    double reserve = 0.0;
    double seller_value = 0.0;

    void validate() const;
};

// Equilibrium bid for a valuation x with no reserve:
//   beta(x) = x - int_0^x [F(y)/F(x)]^{M-1} dy,
// evaluated by quadrature. F(x) = 0 means a zero valuation in effect, so
// the bid is 0.
BidResult bid_general(const AuctionSpec& spec, double x, const QuadratureSpec& quad = {});

// Uniform valuations: beta(x) = (M-1)/M * x, exact for any omega.
BidResult bid_uniform(int bidders, double x, double omega);

// Small-parameter log-normal approximation beta(x) ~ x/2. The overload
// taking a spec fills est_error with the gap to the quadrature bid.
BidResult bid_lognormal_approx(double x);
BidResult bid_lognormal_approx(double x, const AuctionSpec& compare,
                               const QuadratureSpec& quad = {});

// Reserve-price bid for x >= r > 0:
//   beta(x) = x - int_r^x [G(y)/G(x)] dy,   beta(r) = r.
// x < r throws std::invalid_argument("below reserve: no bid").
BidResult bid_reserve_general(const AuctionSpec& spec, double x, const QuadratureSpec& quad = {});

// Uniform closed form beta(x) = r^M / (M x^{M-1}) + x (M-1)/M. The 1/M
// coefficient is forced by the boundary condition beta(r) = r;
// `printed_variant` evaluates the (M+1)/M alternative for comparison
// (it fails the boundary condition and is kept only for inspection).
BidResult bid_reserve_uniform(int bidders, double reserve, double x, double omega,
                              bool printed_variant = false);

// Log-normal first-order form beta(x) = x - h(r)(x-r)/h(x) with
// h(y) = Phi((ln y - mu)/sigma)^{M-1}; est_error is the gap to the
// quadrature bid.
BidResult bid_reserve_lognormal(double mu, double sigma, int bidders, double reserve, double x,
                                const QuadratureSpec& quad = {});

// Optimal reserve r* solving x_s = r - (1 - F(r))/f(r).
double optimal_reserve(const ValuationDistribution& dist, double seller_value,
                       const RootSpec& root = {});

// Expected payment of a bidder with valuation x: m(x) = G(x) beta(x).
double expected_payment(const ValuationDistribution& dist, int bidders, double x,
                        const QuadratureSpec& quad = {});

// Ex-ante expected payment: with no reserve int_0^w y [1-F(y)] g(y) dy;
// with reserve r, r G(r)[1-F(r)] + int_r^w y [1-F(y)] g(y) dy. Unbounded
// supports are integrated to the 1 - 1e-10 quantile.
double ex_ante_payment(const ValuationDistribution& dist, int bidders, double reserve = 0.0,
                       const QuadratureSpec& quad = {});

// Seller revenue E[R_s] = M * E[m].
double expected_revenue(const ValuationDistribution& dist, int bidders, double reserve = 0.0,
                        const QuadratureSpec& quad = {});

}  // namespace auctionkit
