#include "auctionkit/harness.hpp"

#include <cmath>
#include <limits>

#include "auctionkit/rng.hpp"

namespace auctionkit {

namespace {

// Valuation of a given bidder in a given round, as a pure function of the
// seed so parallel partitions of the round range reproduce the same draws.
double round_valuation(const AuctionSpec& spec, std::uint64_t seed, std::uint64_t round,
                       std::uint64_t bidder) {
    if (spec.dist.kind() == DistKind::irwin_hall2) {
        return u01(seed, round, 2 * bidder) + u01(seed, round, 2 * bidder + 1);
    }
    return spec.dist.quantile(u01(seed, round, bidder));
}

}  // namespace

SimulationReport simulate(const AuctionSpec& spec, const BidStrategy& strategy,
                          std::size_t rounds, std::uint64_t seed) {
    spec.validate();
    if (rounds < 100) throw std::invalid_argument("simulate needs at least 100 rounds");

    const int M = spec.bidders;
    const double r = spec.reserve;

    SimulationReport report;
    report.rounds = rounds;
    report.seed = seed;
    report.win_rate.assign(M, 0.0);

    // batch means: 100 batches sized as evenly as possible
    const std::size_t batches = 100;
    std::vector<double> batch_revenue(batches, 0.0);
    std::vector<std::size_t> batch_rounds(batches, 0);

    double total_revenue = 0.0;
    std::size_t no_sale = 0;
    std::vector<std::size_t> wins(M, 0);

    for (std::size_t t = 0; t < rounds; ++t) {
        double best_bid = -1.0;
        int winner = -1;
        int tied = 0;
        for (int j = 0; j < M; ++j) {
            double x = round_valuation(spec, seed, t, j);
            if (x < r) continue;  // below the reserve no bid is placed
            double b = strategy(x);
            if (b > x * (1.0 + 1e-12))
                throw NumericalError("strategy bids above the valuation (dominated)");
            if (b < r) continue;  // a bid under the reserve is a non-bid
            if (b > best_bid) {
                best_bid = b;
                winner = j;
                tied = 1;
            } else if (b == best_bid) {
                // uniform tie break; measure zero for continuous values
                ++tied;
                if (u01(seed, t, 1000003 + j) * tied < 1.0) winner = j;
            }
        }

        std::size_t batch = t * batches / rounds;
        ++batch_rounds[batch];
        if (winner < 0) {
            ++no_sale;
        } else {
            total_revenue += best_bid;
            batch_revenue[batch] += best_bid;
            ++wins[winner];
        }
    }

    report.mean_revenue = total_revenue / rounds;
    report.mean_payment_per_bidder = total_revenue / rounds / M;
    report.no_sale_rate = static_cast<double>(no_sale) / rounds;
    report.mean_seller_payoff = report.mean_revenue + report.no_sale_rate * spec.seller_value;
    for (int j = 0; j < M; ++j) report.win_rate[j] = static_cast<double>(wins[j]) / rounds;

    double mean = report.mean_revenue;
    double var = 0.0;
    for (std::size_t k = 0; k < batches; ++k) {
        double bm = batch_revenue[k] / batch_rounds[k];
        var += (bm - mean) * (bm - mean);
    }
    var /= batches - 1;
    report.revenue_std_error = std::sqrt(var / batches);
    return report;
}

BestResponseReport best_response_scan(const AuctionSpec& spec, double x, int grid_points,
                                      const QuadratureSpec& quad) {
    spec.validate();
    if (grid_points < 11) throw std::invalid_argument("best-response scan needs grid >= 11");
    if (spec.reserve != 0.0)
        throw std::invalid_argument("best-response scan covers the no-reserve case");

    double top = spec.dist.bounded() ? spec.dist.support_hi() : spec.dist.quantile(1.0 - 1e-10);

    BestResponseReport rep;
    rep.z.resize(grid_points);
    rep.payoff.resize(grid_points);
    double best = -std::numeric_limits<double>::infinity();
    double second = best;
    for (int i = 0; i < grid_points; ++i) {
        double z = top * i / (grid_points - 1);
        double G = std::pow(spec.dist.cdf(z), spec.bidders - 1);
        double beta = bid_general(spec, z, quad).bid;
        double payoff = G * (x - beta);
        rep.z[i] = z;
        rep.payoff[i] = payoff;
        if (payoff > best) {
            second = best;
            best = payoff;
            rep.argmax = i;
        } else if (payoff > second) {
            second = payoff;
        }
    }
    rep.margin = best - second;
    return rep;
}

BidStrategy equilibrium_strategy(const AuctionSpec& spec) {
    spec.validate();
    if (spec.dist.kind() == DistKind::uniform) {
        int m = spec.bidders;
        double omega = spec.dist.support_hi();
        double r = spec.reserve;
        if (r > 0.0)
            return [m, r, omega](double x) { return bid_reserve_uniform(m, r, x, omega).bid; };
        return [m, omega](double x) { return bid_uniform(m, x, omega).bid; };
    }
    AuctionSpec copy = spec;
    if (copy.reserve > 0.0)
        return [copy](double x) { return bid_reserve_general(copy, x).bid; };
    return [copy](double x) { return bid_general(copy, x).bid; };
}

}  // namespace auctionkit
