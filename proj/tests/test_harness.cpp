#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "auctionkit/bidder_count.hpp"
#include "auctionkit/harness.hpp"

using namespace auctionkit;

namespace {

const ValuationDistribution kUnit = ValuationDistribution::uniform(1.0);

}  // namespace

TEST_CASE("revenue identity for two uniform bidders") {
    AuctionSpec spec{2, kUnit, 0.0, 0.0};
    SimulationReport rep = simulate(spec, equilibrium_strategy(spec), 1000000, 91);
    // E[R_s] = M E[m] = 1/3
    CHECK(std::fabs(rep.mean_revenue - 1.0 / 3.0) <= 3.0 * rep.revenue_std_error);
    CHECK(rep.revenue_std_error < 2e-4);
    CHECK(rep.mean_payment_per_bidder == doctest::Approx(rep.mean_revenue / 2.0));
    CHECK(rep.no_sale_rate == 0.0);
    double wins = std::accumulate(rep.win_rate.begin(), rep.win_rate.end(), 0.0);
    CHECK(wins == doctest::Approx(1.0));
}

TEST_CASE("revenue identity for log-normal bidders") {
    auto ln = ValuationDistribution::log_normal(0.0, 0.6);
    AuctionSpec spec{3, ln, 0.0, 0.0};
    SimulationReport rep = simulate(spec, equilibrium_strategy(spec), 200000, 7);
    double analytic = expected_revenue(ln, 3);
    CHECK(std::fabs(rep.mean_revenue - analytic) <= 3.0 * rep.revenue_std_error);
}

TEST_CASE("truthful bidding collects the highest valuation") {
    AuctionSpec spec{2, kUnit, 0.0, 0.0};
    SimulationReport rep = simulate(spec, [](double x) { return x; }, 400000, 13);
    // E[max(U, U)] = 2/3
    CHECK(std::fabs(rep.mean_revenue - 2.0 / 3.0) <= 3.0 * rep.revenue_std_error);
}

TEST_CASE("reserve screening and no-sale mass") {
    AuctionSpec spec{2, kUnit, 0.5, 0.0};
    SimulationReport rep = simulate(spec, equilibrium_strategy(spec), 1000000, 3);
    // no sale iff both draws fall under the reserve: F(r)^M = 0.25
    double se = std::sqrt(0.25 * 0.75 / 1000000.0);
    CHECK(std::fabs(rep.no_sale_rate - 0.25) <= 3.0 * se);

    // revenue identity with reserve
    double analytic = expected_revenue(kUnit, 2, 0.5);
    CHECK(std::fabs(rep.mean_revenue - analytic) <= 3.0 * rep.revenue_std_error);

    // seller keeps x_s on no-sale rounds
    AuctionSpec keeper{2, kUnit, 0.5, 0.3};
    SimulationReport kept = simulate(keeper, equilibrium_strategy(keeper), 200000, 3);
    CHECK(kept.mean_seller_payoff ==
          doctest::Approx(kept.mean_revenue + 0.3 * kept.no_sale_rate));

    // a reserve at the top of the support kills every sale
    AuctionSpec blocked{2, kUnit, 1.0, 0.0};
    SimulationReport none = simulate(blocked, [](double x) { return x; }, 1000, 5);
    CHECK(none.mean_revenue == 0.0);
    CHECK(none.no_sale_rate == doctest::Approx(1.0));
}

TEST_CASE("win rates are symmetric across bidders") {
    AuctionSpec spec{4, kUnit, 0.0, 0.0};
    SimulationReport rep = simulate(spec, equilibrium_strategy(spec), 400000, 17);
    for (double w : rep.win_rate) CHECK(w == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("seeded runs are bit-reproducible and seed-sensitive") {
    AuctionSpec spec{3, kUnit, 0.2, 0.0};
    SimulationReport a = simulate(spec, equilibrium_strategy(spec), 5000, 123);
    SimulationReport b = simulate(spec, equilibrium_strategy(spec), 5000, 123);
    SimulationReport c = simulate(spec, equilibrium_strategy(spec), 5000, 124);
    CHECK(a.mean_revenue == b.mean_revenue);
    CHECK(a.win_rate == b.win_rate);
    CHECK(a.no_sale_rate == b.no_sale_rate);
    CHECK(a.mean_revenue != c.mean_revenue);
}

TEST_CASE("dominated strategies are rejected") {
    AuctionSpec spec{2, kUnit, 0.0, 0.0};
    CHECK_THROWS_AS(simulate(spec, [](double x) { return x * 1.5; }, 1000, 1), NumericalError);
    CHECK_THROWS_AS(simulate(spec, [](double x) { return x; }, 50, 1), std::invalid_argument);
}

TEST_CASE("best response scan peaks at the true valuation") {
    AuctionSpec spec{2, kUnit, 0.0, 0.0};
    BestResponseReport rep = best_response_scan(spec, 0.7, 101);
    CHECK(rep.z[rep.argmax] == doctest::Approx(0.7).epsilon(0.011));
    CHECK(rep.margin >= 0.0);

    // deviation payoff difference G(z)(z-x) - int_x^z G >= 0 for sampled z
    for (double z : {0.2, 0.5, 0.9}) {
        double x = 0.7;
        double gap = kUnit.cdf(z) * (z - x) -
                     integrate([&](double y) { return kUnit.cdf(y); }, x, z);
        CHECK(gap >= -1e-12);
    }

    BestResponseReport zero = best_response_scan(spec, 0.0, 21);
    for (double p : zero.payoff) CHECK(p <= 1e-12);

    CHECK_THROWS_AS(best_response_scan(spec, 0.5, 5), std::invalid_argument);
}

TEST_CASE("monte carlo matches the uncertain-count fixed point loosely") {
    // simulate a 3-bidder auction where everyone uses the mixture bid for
    // the symmetric count pmf; revenue must stay within the two- and
    // three-bidder equilibrium revenues
    BidderCountPMF pmf = discrete_symmetric_pmf(3);
    AuctionSpec spec{3, kUnit, 0.0, 0.0};
    auto strategy = [&pmf](double x) { return bid_uncertain(pmf, kUnit, x).bid; };
    SimulationReport rep = simulate(spec, strategy, 200000, 29);
    CHECK(rep.mean_revenue > expected_revenue(kUnit, 2));
    CHECK(rep.mean_revenue < expected_revenue(kUnit, 3) + 3.0 * rep.revenue_std_error);
}
