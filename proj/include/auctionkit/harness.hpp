#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "auctionkit/equilibrium.hpp"

namespace auctionkit {

// Maps a valuation to a bid; only consulted for valuations at or above the
// reserve. Returning more than the valuation trips the dominated-strategy
// guard in simulate().
using BidStrategy = std::function<double(double)>;

struct SimulationReport {
    std::size_t rounds = 0;
    double mean_revenue = 0.0;        // mean winning payment per round (0 on no sale)
    double revenue_std_error = 0.0;   // batch-means standard error (100 batches)
    double mean_payment_per_bidder = 0.0;
    std::vector<double> win_rate;     // per bidder; sums to 1 - no_sale_rate
    double no_sale_rate = 0.0;
    double mean_seller_payoff = 0.0;  // revenue plus x_s retained on no-sale rounds
    std::uint64_t seed = 0;
};

// Monte Carlo first-price auction: each round draws M valuations i.i.d.
// from spec.dist, bidders with valuation >= r submit strategy(x), the
// highest bid at or above r wins and pays it (ties broken uniformly).
// Valuations are keyed by (seed, round, bidder), so results do not depend
// on traversal order.
SimulationReport simulate(const AuctionSpec& spec, const BidStrategy& strategy,
                          std::size_t rounds, std::uint64_t seed);

struct BestResponseReport {
    std::vector<double> z;       // candidate valuations whose bid was tried
    std::vector<double> payoff;  // Pi(beta(z), x) = G(z) (x - beta(z))
    std::size_t argmax = 0;
    double margin = 0.0;         // payoff(argmax) - best payoff off the argmax
};

// Scan deviation payoffs for a bidder with valuation x bidding as if the
// valuation were z, over a uniform z-grid; in equilibrium the argmax sits
// at z = x.
BestResponseReport best_response_scan(const AuctionSpec& spec, double x, int grid_points,
                                      const QuadratureSpec& quad = {});

// Equilibrium strategy for the given auction (closed form when available,
// else quadrature); used by the CLI and tests.
BidStrategy equilibrium_strategy(const AuctionSpec& spec);

}  // namespace auctionkit
