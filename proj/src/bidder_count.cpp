#include "auctionkit/bidder_count.hpp"

#include <cmath>

#include "auctionkit/equilibrium.hpp"

namespace auctionkit {

void BidderCountPMF::validate() const {
    if (max_bidders < 2) throw std::invalid_argument("bidder count PMF needs M >= 2");
    if (p.size() != static_cast<std::size_t>(max_bidders))
        throw std::invalid_argument("bidder count PMF needs exactly M entries");
    double sum = 0.0, comp = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::invalid_argument("bidder count probabilities must be >= 0");
        double t = sum + v;
        comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    if (std::fabs(sum + comp - 1.0) > 1e-12)
        throw std::invalid_argument("bidder count probabilities must sum to 1");
}

BidderCountPMF BidderCountPMF::degenerate(int max_bidders, int rivals) {
    if (max_bidders < 2) throw std::invalid_argument("bidder count PMF needs M >= 2");
    if (rivals < 0 || rivals >= max_bidders)
        throw std::invalid_argument("rival count must lie in [0, M-1]");
    BidderCountPMF pmf{max_bidders, std::vector<double>(max_bidders, 0.0)};
    pmf.p[rivals] = 1.0;
    return pmf;
}

long long delta_p_denominator_floor(int max_bidders) {
    long long m = max_bidders;
    return (m * m) / 4;  // floor(M^2/4)
}

long long delta_p_denominator_mod(int max_bidders) {
    // floor((M-1)/2) * (floor((M-1)/2) + 1)
    //   + [((M-1)/2 mod 1) + (M-1)/2] * [2 ((M-1)/2 mod 1)]
    // evaluated exactly: the mod term is 0 for odd M and 1/2 for even M.
    long long m = max_bidders;
    long long k = (m - 1) / 2;
    long long base = k * (k + 1);
    if (m % 2 == 0) {
        // (1/2 + (M-1)/2) * (2 * 1/2) = M/2
        base += m / 2;
    }
    return base;
}

BidderCountPMF discrete_symmetric_pmf(int max_bidders) {
    if (max_bidders < 2) throw std::invalid_argument("bidder count PMF needs M >= 2");

    long long denom = delta_p_denominator_floor(max_bidders);
    if (denom != delta_p_denominator_mod(max_bidders))
        throw NumericalError("the two delta_p definitions disagree");

    // Integer numerators first: l for the rising half, M - l for the
    // falling half. Their sum must equal the denominator exactly.
    const int M = max_bidders;
    std::vector<long long> numer(M);
    long long total = 0;
    for (int l = 0; l < M; ++l) {
        numer[l] = (2 * l <= M - 1) ? l : M - l;
        total += numer[l];
    }
    if (total != denom) throw NumericalError("symmetric PMF numerators do not normalize");

    BidderCountPMF pmf{M, std::vector<double>(M)};
    for (int l = 0; l < M; ++l)
        pmf.p[l] = static_cast<double>(numer[l]) / static_cast<double>(denom);
    return pmf;
}

BidResult bid_uncertain(const BidderCountPMF& pmf, const ValuationDistribution& dist, double x,
                        const QuadratureSpec& quad) {
    pmf.validate();
    if (x < 0.0 || x > dist.support_hi())
        throw std::invalid_argument("valuation outside the distribution support");

    const int M = pmf.max_bidders;
    double F = dist.cdf(x);
    bool uniform_fast_path = dist.kind() == DistKind::uniform;

    // weights p_l F^l and fixed-count bids beta^l (l rivals, l+1 bidders)
    double G = 0.0;
    double weighted = 0.0;
    double Fl = 1.0;
    for (int l = 0; l < M; ++l, Fl *= F) {
        if (pmf.p[l] == 0.0) continue;
        double w = pmf.p[l] * Fl;
        if (w == 0.0) continue;
        double bid_l;
        if (l == 0) {
            bid_l = 0.0;  // no rivals, nothing to outbid
        } else if (uniform_fast_path) {
            bid_l = x * l / (l + 1.0);
        } else {
            AuctionSpec spec{l + 1, dist, 0.0, 0.0};
            bid_l = bid_general(spec, x, quad).bid;
        }
        G += w;
        weighted += w * bid_l;
    }
    if (G <= 0.0) return {0.0, BidMethod::quadrature, std::nullopt};
    BidMethod method = uniform_fast_path ? BidMethod::closed_form : BidMethod::quadrature;
    return {weighted / G, method, std::nullopt};
}

}  // namespace auctionkit
