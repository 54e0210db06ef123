#pragma once

#include <vector>

#include "auctionkit/common.hpp"
#include "auctionkit/distributions.hpp"
#include "auctionkit/numerics.hpp"

namespace auctionkit {

// Probabilities over the number of RIVAL bidders l = 0..M-1, so a bidder
// facing l rivals is in an auction with l+1 bidders in total. Indexing by
// rivals rather than totals is the single easiest thing to get wrong when
// consuming this type.
struct BidderCountPMF {
    int max_bidders = 2;       // M: largest possible total number of bidders
    std::vector<double> p;     // p[l], l = 0..M-1

    void validate() const;

    // Point mass at l rivals (l+1 total bidders).
    static BidderCountPMF degenerate(int max_bidders, int rivals);
};

// Triangular PMF p_l = l*dp for l <= (M-1)/2, (M-l)*dp above, with
// dp = 1/floor(M^2/4). Both published expressions for dp (the floor form
// and the mod form) are evaluated and must agree exactly.
BidderCountPMF discrete_symmetric_pmf(int max_bidders);

// dp by each definition, in exact integer arithmetic (returns the
// denominator floor(M^2/4)).
long long delta_p_denominator_floor(int max_bidders);
long long delta_p_denominator_mod(int max_bidders);

// Mixture bid under bidder-count uncertainty:
//   beta(x) = sum_l p_l G^l(x) beta^l(x) / G(x),  G(x) = sum_l p_l F(x)^l,
// where beta^l is the fixed-count equilibrium bid with l+1 bidders.
// Uniform valuations take the closed-form fast path beta^l = l/(l+1) x.
BidResult bid_uncertain(const BidderCountPMF& pmf, const ValuationDistribution& dist, double x,
                        const QuadratureSpec& quad = {});

}  // namespace auctionkit
