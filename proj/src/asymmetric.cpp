#include "auctionkit/asymmetric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "auctionkit/numerics.hpp"

namespace auctionkit {

void TwoGroupSpec::validate() const {
    if (total_bidders < 2) throw std::invalid_argument("an auction needs at least two bidders");
    if (group1_rivals < 0 || group1_rivals > total_bidders - 1)
        throw std::invalid_argument("group-1 rival count must lie in [0, M-1]");
    if (!f1.bounded() || !f2.bounded())
        throw std::invalid_argument("the two-group solver needs bounded valuation supports");
    if (!(f1.pdf(f1.support_hi()) > 0.0) || !(f2.pdf(f2.support_hi()) > 0.0))
        throw std::invalid_argument("the two-group solver needs positive density at the top "
                                    "of each support");
}

namespace {

struct SystemRhs {
    const TwoGroupSpec& spec;

    // Solve the 2x2 linear system for u_i = f_i(phi_i) phi_i'/F_i(phi_i):
    //   K u1 + (M-1-K) u2 = R1,  (K+1) u1 + (M-2-K) u2 = R2,
    // whose determinant is -(M-1); then phi_i' = u_i F_i/f_i.
    OdeState operator()(double b, const OdeState& phi) const {
        const double K = spec.group1_rivals;
        const double M = spec.total_bidders;
        double r1 = 1.0 / (phi[0] - b);
        double r2 = 1.0 / (phi[1] - b);
        double u1 = (r2 * (M - 1.0 - K) - r1 * (M - 2.0 - K)) / (M - 1.0);
        double u2 = (r1 * (K + 1.0) - r2 * K) / (M - 1.0);
        double F1 = spec.f1.cdf(phi[0]);
        double F2 = spec.f2.cdf(phi[1]);
        double f1 = spec.f1.pdf(std::min(phi[0], spec.f1.support_hi()));
        double f2 = spec.f2.pdf(std::min(phi[1], spec.f2.support_hi()));
        return {u1 * F1 / f1, u2 * F2 / f2};
    }
};

struct ShotResult {
    bool hit = false;  // touched the diagonal before reaching the bottom
    std::vector<double> bid;   // descending
    std::vector<double> phi1;
    std::vector<double> phi2;
};

// Backward integration from b_bar toward 0. Near the zero-profit boundary
// every solution approaches phi_i ~ M b/(M-1), so the local rate of the
// perturbation dynamics is (M-1)/b and a fixed step goes unstable for
// small b; below b_switch the step is shrunk proportionally to b instead.
// A trajectory is classified as a diagonal hit once a margin phi_i - b
// drops under a small fraction of its b/(M-1) asymptote.
ShotResult shoot(const TwoGroupSpec& spec, double b_bar, int steps) {
    SystemRhs rhs{spec};
    const double omega1 = spec.f1.support_hi();
    const double omega2 = spec.f2.support_hi();
    const double m1 = spec.total_bidders - 1;

    ShotResult shot;
    shot.bid.reserve(steps + 600);
    shot.phi1.reserve(steps + 600);
    shot.phi2.reserve(steps + 600);

    auto record = [&](double b, const OdeState& phi) {
        shot.bid.push_back(b);
        shot.phi1.push_back(phi[0]);
        shot.phi2.push_back(phi[1]);
    };

    // Analytic first step off the top boundary, where phi_i = omega_i sits
    // on the edge of the support.
    OdeState phi{omega1, omega2};
    OdeState slope = rhs(b_bar, phi);
    double taylor = 1e-4 * b_bar;
    record(b_bar, phi);
    double b = b_bar - taylor;
    phi = {omega1 - taylor * slope[0], omega2 - taylor * slope[1]};
    record(b, phi);

    const double h = b / steps;
    const double b_switch = std::max(16.0, 2.0 * m1) * h;
    const double b_floor = 1e-10 * b_bar;
    const double shrink = 1.0 - std::min(0.25 / m1, 0.05);

    auto advance = [&](double b_next) -> bool {
        OdeState next = rk4_step([&rhs](double t, const OdeState& y) { return rhs(t, y); }, b,
                                 phi, b_next - b);
        // Trigger the hit at half the asymptotic margin b/(M-1): waiting
        // for a smaller margin puts the crossing in stiff territory where
        // a fixed step can jump the diagonal and misclassify the shot.
        double guard = 0.5 * b_next / m1;
        if (!std::isfinite(next[0]) || !std::isfinite(next[1]) || next[0] - b_next <= guard ||
            next[1] - b_next <= guard) {
            shot.hit = true;
            return false;
        }
        b = b_next;
        phi = next;
        record(b, phi);
        return true;
    };

    for (int i = steps - 1; i >= 0 && b > b_switch; --i)
        if (!advance(i * h)) return shot;
    while (b > b_floor)
        if (!advance(std::max(b * shrink, 0.5 * b_floor))) return shot;
    return shot;
}

}  // namespace

InverseBidTable solve_two_group(const TwoGroupSpec& spec, int steps) {
    spec.validate();
    if (steps < 64) throw std::invalid_argument("two-group solver needs steps >= 64");

    const double top = std::min(spec.f1.support_hi(), spec.f2.support_hi());

    // Bisect on b_bar: diagonal hits push the bracket down, completed
    // descents push it up.
    double lo = 1e-9 * top;
    double hi = top * (1.0 - 1e-9);
    ShotResult best_hi = shoot(spec, hi, steps);
    if (!best_hi.hit)
        throw NumericalError("two-group shooting failed to bracket the top bid");
    if (shoot(spec, lo, steps).hit)
        throw NumericalError("two-group shooting failed to bracket the bottom");

    ShotResult best_lo;
    bool have_lo = false;
    for (int it = 0; it < 100 && hi - lo > 8e-16 * top; ++it) {
        double mid = 0.5 * (lo + hi);
        ShotResult shot = shoot(spec, mid, steps);
        if (shot.hit) {
            hi = mid;
            best_hi = std::move(shot);
        } else {
            lo = mid;
            best_lo = std::move(shot);
            have_lo = true;
        }
    }
    if (!have_lo || best_hi.bid.empty())
        throw NumericalError("two-group shooting found no usable trajectory");

    // The lo and hi trajectories bracket the true solution; keep rows only
    // while they agree, then pin the zero-profit boundary point exactly.
    std::size_t usable = std::min(best_lo.bid.size(), best_hi.bid.size());
    const double agree_tol = 1e-9 * top;
    std::size_t cut = usable;
    for (std::size_t i = 0; i < usable; ++i) {
        if (std::fabs(best_lo.phi1[i] - best_hi.phi1[i]) > agree_tol ||
            std::fabs(best_lo.phi2[i] - best_hi.phi2[i]) > agree_tol) {
            cut = i;
            break;
        }
    }
    if (cut < 16) throw NumericalError("two-group trajectories disagree near the top bid");

    InverseBidTable table;
    table.b_bar = best_lo.bid.front();
    table.b0 = 0.0;
    table.bid.resize(cut + 1);
    table.phi1.resize(cut + 1);
    table.phi2.resize(cut + 1);
    table.bid[0] = 0.0;
    table.phi1[0] = 0.0;
    table.phi2[0] = 0.0;
    for (std::size_t i = 0; i < cut; ++i) {
        table.bid[cut - i] = best_lo.bid[i];
        table.phi1[cut - i] = best_lo.phi1[i];
        table.phi2[cut - i] = best_lo.phi2[i];
    }
    return table;
}

BidResult bid_asymmetric(const InverseBidTable& table, int group, double x) {
    if (group != 1 && group != 2) throw std::invalid_argument("group must be 1 or 2");
    const std::vector<double>& phi = group == 1 ? table.phi1 : table.phi2;
    if (phi.empty()) throw std::invalid_argument("empty inverse bid table");
    if (x < 0.0 || x > phi.back() * (1.0 + 1e-12))
        throw std::invalid_argument("valuation outside the group support");
    if (x >= phi.back()) return {table.b_bar, BidMethod::quadrature, std::nullopt};

    // phi is strictly increasing, so invert by bisecting the grid and
    // interpolating linearly inside the bracketing cell.
    auto it = std::lower_bound(phi.begin(), phi.end(), x);
    std::size_t j = it - phi.begin();
    if (j == 0) return {table.bid.front(), BidMethod::quadrature, std::nullopt};
    double t = (x - phi[j - 1]) / (phi[j] - phi[j - 1]);
    double b = table.bid[j - 1] + t * (table.bid[j] - table.bid[j - 1]);
    return {b, BidMethod::quadrature, std::nullopt};
}

std::array<double, 2> two_group_residual(const TwoGroupSpec& spec, const InverseBidTable& table,
                                         std::size_t i) {
    if (i == 0 || i + 1 >= table.bid.size())
        throw std::invalid_argument("residuals need an interior grid index");

    // Three-point derivative that is exact for quadratics on an uneven
    // grid; the plain centered quotient loses an order where the step
    // size changes.
    double hm = table.bid[i] - table.bid[i - 1];
    double hp = table.bid[i + 1] - table.bid[i];
    auto deriv = [&](const std::vector<double>& y) {
        return (hm * hm * y[i + 1] + (hp * hp - hm * hm) * y[i] - hp * hp * y[i - 1]) /
               (hp * hm * (hp + hm));
    };
    double dphi1 = deriv(table.phi1);
    double dphi2 = deriv(table.phi2);
    double b = table.bid[i];
    double p1 = table.phi1[i];
    double p2 = table.phi2[i];

    double u1 = spec.f1.pdf(p1) * dphi1 / spec.f1.cdf(p1);
    double u2 = spec.f2.pdf(p2) * dphi2 / spec.f2.cdf(p2);
    const double K = spec.group1_rivals;
    const double M = spec.total_bidders;
    return {K * u1 + (M - 1.0 - K) * u2 - 1.0 / (p1 - b),
            (K + 1.0) * u1 + (M - 2.0 - K) * u2 - 1.0 / (p2 - b)};
}

std::vector<double> asymmetric_system_residual(const std::vector<ValuationDistribution>& dists,
                                               const std::vector<double>& phi,
                                               const std::vector<double>& dphi, double b) {
    const std::size_t M = dists.size();
    if (phi.size() != M || dphi.size() != M)
        throw std::invalid_argument("per-bidder inverse bids and derivatives must match");
    if (M < 2) throw std::invalid_argument("an auction needs at least two bidders");

    std::vector<double> terms(M);
    double total = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        terms[j] = dists[j].pdf(phi[j]) * dphi[j] / dists[j].cdf(phi[j]);
        total += terms[j];
    }
    std::vector<double> residual(M);
    for (std::size_t i = 0; i < M; ++i)
        residual[i] = (total - terms[i]) - 1.0 / (phi[i] - b);
    return residual;
}

}  // namespace auctionkit
