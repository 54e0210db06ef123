#include "auctionkit/equilibrium.hpp"

#include <cmath>
#include <sstream>

namespace auctionkit {

void AuctionSpec::validate() const {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (reserve < 0.0 || !std::isfinite(reserve))
        throw std::invalid_argument("reserve must be a finite nonnegative value");
    if (reserve > dist.support_hi())
        throw std::invalid_argument("reserve lies above the valuation support");
    if (seller_value < 0.0 || seller_value >= dist.support_hi())
        throw std::invalid_argument("seller value must lie in [0, omega)");
}

BidResult bid_general(const AuctionSpec& spec, double x, const QuadratureSpec& quad) {
    spec.validate();
    if (spec.reserve != 0.0)
        throw std::invalid_argument("bid_general handles the no-reserve case; "
                                    "use bid_reserve_general");
    if (x < 0.0 || x > spec.dist.support_hi())
        throw std::invalid_argument("valuation outside the distribution support");

    double Fx = spec.dist.cdf(x);
    if (Fx <= 0.0) return {0.0, BidMethod::quadrature, std::nullopt};

    const int exponent = spec.bidders - 1;
    auto shade = [&](double y) { return std::pow(spec.dist.cdf(y) / Fx, exponent); };
    double bid = x - integrate(shade, 0.0, x, quad);
    return {bid, BidMethod::quadrature, std::nullopt};
}

BidResult bid_uniform(int bidders, double x, double omega) {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (!(omega > 0.0)) throw std::invalid_argument("uniform distribution needs omega > 0");
    if (x < 0.0 || x > omega)
        throw std::invalid_argument("valuation outside the distribution support");
    double bid = x * (bidders - 1) / bidders;
    return {bid, BidMethod::closed_form, std::nullopt};
}

BidResult bid_lognormal_approx(double x) {
    if (x < 0.0) throw std::invalid_argument("valuation must be nonnegative");
    return {0.5 * x, BidMethod::taylor_approx, std::nullopt};
}

BidResult bid_lognormal_approx(double x, const AuctionSpec& compare, const QuadratureSpec& quad) {
    BidResult res = bid_lognormal_approx(x);
    if (compare.dist.kind() != DistKind::log_normal)
        throw std::invalid_argument("comparison spec must be log-normal");
    res.est_error = std::fabs(bid_general(compare, x, quad).bid - res.bid);
    return res;
}

BidResult bid_reserve_general(const AuctionSpec& spec, double x, const QuadratureSpec& quad) {
    spec.validate();
    if (!(spec.reserve > 0.0))
        throw std::invalid_argument("bid_reserve_general needs a positive reserve");
    if (x < spec.reserve) throw std::invalid_argument("below reserve: no bid");
    if (x > spec.dist.support_hi())
        throw std::invalid_argument("valuation outside the distribution support");

    double Fx = spec.dist.cdf(x);
    const int exponent = spec.bidders - 1;
    // beta(x) = x - int_r^x [G(y)/G(x)] dy; the empty integral at x = r
    // makes beta(r) = r exact.
    auto shade = [&](double y) { return std::pow(spec.dist.cdf(y) / Fx, exponent); };
    double bid = x - integrate(shade, spec.reserve, x, quad);
    return {bid, BidMethod::quadrature, std::nullopt};
}

BidResult bid_reserve_uniform(int bidders, double reserve, double x, double omega,
                              bool printed_variant) {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (!(omega > 0.0)) throw std::invalid_argument("uniform distribution needs omega > 0");
    if (reserve < 0.0 || reserve > omega)
        throw std::invalid_argument("reserve outside the distribution support");
    if (x < reserve) throw std::invalid_argument("below reserve: no bid");
    if (x > omega) throw std::invalid_argument("valuation outside the distribution support");
    if (reserve == 0.0) return bid_uniform(bidders, x, omega);

    double head = std::pow(reserve, bidders) / std::pow(x, bidders - 1);
    // the (M+1)/M variant fails beta(r) = r; kept only for comparison
    head *= printed_variant ? (bidders + 1.0) / bidders : 1.0 / bidders;
    double bid = head + x * (bidders - 1) / bidders;
    return {bid, BidMethod::closed_form, std::nullopt};
}

BidResult bid_reserve_lognormal(double mu, double sigma, int bidders, double reserve, double x,
                                const QuadratureSpec& quad) {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (!(reserve > 0.0)) throw std::invalid_argument("reserve must be positive");
    if (x < reserve) throw std::invalid_argument("below reserve: no bid");

    auto dist = ValuationDistribution::log_normal(mu, sigma);
    // h(y) = Phi((ln y - mu)/sigma)^{M-1}; one Taylor step of the exact
    // integral gives beta(x) = x - h(r)(x - r)/h(x).
    double hr = std::pow(dist.cdf(reserve), bidders - 1);
    double hx = std::pow(dist.cdf(x), bidders - 1);
    double bid = x == reserve ? reserve : x - hr * (x - reserve) / hx;

    AuctionSpec exact{bidders, dist, reserve, 0.0};
    double quad_bid = bid_reserve_general(exact, x, quad).bid;
    return {bid, BidMethod::taylor_approx, std::fabs(quad_bid - bid)};
}

double optimal_reserve(const ValuationDistribution& dist, double seller_value,
                       const RootSpec& root) {
    if (seller_value < 0.0 || seller_value >= dist.support_hi())
        throw std::invalid_argument("seller value must lie in [0, omega)");

    auto virtual_gap = [&](double r) {
        double f = dist.pdf(r);
        if (f <= 0.0) throw NumericalError("density vanishes on the reserve search bracket");
        return r - (1.0 - dist.cdf(r)) / f - seller_value;
    };

    // The gap is negative at r = x_s and positive near the top of the
    // support; scan upward until the sign flips, then hand over to the
    // bracketed solver.
    double hi_limit = dist.bounded() ? dist.support_hi() : dist.quantile(1.0 - 1e-12);
    double lo = std::max(seller_value, 1e-12 * hi_limit);
    if (dist.kind() == DistKind::log_normal && lo <= 0.0) lo = dist.quantile(1e-12);
    double flo = virtual_gap(lo);
    if (flo == 0.0) return lo;
    if (flo > 0.0) throw NumericalError("no reserve root: condition already positive at x_s");

    double hi = lo;
    double fhi = flo;
    for (int i = 0; i < 64 && fhi < 0.0; ++i) {
        hi = lo + (hi_limit - lo) * (1.0 - std::pow(0.5, i + 1));
        fhi = virtual_gap(hi);
    }
    if (fhi < 0.0) throw NumericalError("no reserve root inside the valuation support");

    RootSpec spec = root;
    spec.lo = lo;
    spec.hi = hi;
    return find_root(virtual_gap, spec);
}

double expected_payment(const ValuationDistribution& dist, int bidders, double x,
                        const QuadratureSpec& quad) {
    AuctionSpec spec{bidders, dist, 0.0, 0.0};
    double G = std::pow(dist.cdf(x), bidders - 1);
    if (G <= 0.0) return 0.0;
    return G * bid_general(spec, x, quad).bid;
}

double ex_ante_payment(const ValuationDistribution& dist, int bidders, double reserve,
                       const QuadratureSpec& quad) {
    if (bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (reserve < 0.0) throw std::invalid_argument("reserve must be nonnegative");

    OrderStatisticDistribution os = order_stat(dist, bidders);
    double top = dist.bounded() ? dist.support_hi() : dist.quantile(1.0 - 1e-10);
    auto integrand = [&](double y) { return y * (1.0 - dist.cdf(y)) * os.pdf(y); };
    double tail = integrate(integrand, reserve, top, quad);
    double head = reserve > 0.0 ? reserve * os.cdf(reserve) * (1.0 - dist.cdf(reserve)) : 0.0;
    return head + tail;
}

double expected_revenue(const ValuationDistribution& dist, int bidders, double reserve,
                        const QuadratureSpec& quad) {
    return bidders * ex_ante_payment(dist, bidders, reserve, quad);
}

}  // namespace auctionkit
