#pragma once

#include <array>
#include <functional>
#include <vector>

#include "auctionkit/common.hpp"
#include "auctionkit/distributions.hpp"

namespace auctionkit {

// Two groups of bidders: group 1 holds K+1 bidders with distribution F1,
// group 2 the remaining M-K-1 with F2. Both supports must be bounded and
// start at 0.
struct TwoGroupSpec {
    ValuationDistribution f1 = ValuationDistribution::uniform(1.0);
    ValuationDistribution f2 = ValuationDistribution::uniform(1.0);
    int group1_rivals = 0;  // K: rivals with F1 faced by a group-1 bidder
    int total_bidders = 2;  // M

    int group1_size() const { return group1_rivals + 1; }
    int group2_size() const { return total_bidders - group1_rivals - 1; }
    void validate() const;
};

// Tabulated inverse bid functions phi_i(b) on a uniform bid grid
// [0, b_bar]; phi_i is strictly increasing with phi_i(b_bar) = omega_i.
struct InverseBidTable {
    std::vector<double> bid;
    std::vector<double> phi1;
    std::vector<double> phi2;
    double b_bar = 0.0;
    double b0 = 0.0;
};

// Solve the two-group first-order-condition system
//   K u1 + (M-1-K) u2 = 1/(phi1 - b)      (group-1 bidder)
//   (K+1) u1 + (M-2-K) u2 = 1/(phi2 - b)  (group-2 bidder)
// with u_i = f_i(phi_i) phi_i'/F_i(phi_i), integrating backward from the
// common top bid b_bar (found by shooting) to the zero-profit boundary
// phi_i(0) = 0.
InverseBidTable solve_two_group(const TwoGroupSpec& spec, int steps = 4096);

// Bid for a group member by monotone interpolation of the inverse table.
BidResult bid_asymmetric(const InverseBidTable& table, int group, double x);

// First-order-condition residuals of the tabulated solution at grid index
// i, using centered finite differences for phi' (independent of the
// derivatives used while solving). Returns {group-1 residual, group-2
// residual}.
std::array<double, 2> two_group_residual(const TwoGroupSpec& spec, const InverseBidTable& table,
                                         std::size_t i);

// Residual checker for the general M-bidder asymmetric system
//   sum_{j != i} f_j(phi_j) phi_j' / F_j(phi_j) - 1/(phi_i - b)
// given per-bidder inverse bids and their derivatives at a common b.
// Exposed for verification only; the solver covers the two-group case.
std::vector<double> asymmetric_system_residual(
    const std::vector<ValuationDistribution>& dists,
    const std::vector<double>& phi, const std::vector<double>& dphi, double b);

}  // namespace auctionkit
