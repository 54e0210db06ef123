#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "auctionkit/common.hpp"

namespace auctionkit {

// Standard normal CDF via the complementary error function; absolute error
// well below 1e-12 over the whole real line.
double norm_cdf(double z);
double norm_pdf(double z);

// Inverse standard normal CDF (rational approximation plus Halley
// refinement); requires p in (0,1).
double norm_quantile(double p);

enum class DistKind {
    uniform,       // U[0, omega]
    log_normal,    // exp(N(mu, sigma)), support (0, inf)
    irwin_hall2,   // sum of two independent U[0,1], support [0, 2]
    folded_normal, // |N(mu0, sigma0)|, support [0, inf)
};

const char* to_string(DistKind k);
DistKind dist_kind_from_string(const std::string& name);

// A valuation distribution with closed-form CDF/PDF/quantile and
// deterministic seeded sampling. Immutable value type; parameters are
// validated at construction so evaluation never throws.
class ValuationDistribution {
public:
    static ValuationDistribution uniform(double omega);
    static ValuationDistribution log_normal(double mu, double sigma);
    static ValuationDistribution irwin_hall2();
    static ValuationDistribution folded_normal(double mu0 = 0.5, double sigma0 = 0.5);

    DistKind kind() const { return kind_; }
    double param1() const { return p1_; }  // omega, mu, or mu0
    double param2() const { return p2_; }  // sigma or sigma0

    double support_lo() const { return 0.0; }
    double support_hi() const;  // +inf for unbounded kinds
    bool bounded() const;

    // F(x); x outside the support clamps to 0 or 1. The log-normal F(0)
    // is the right limit 0.
    double cdf(double x) const;
    // f(x) for x in the support, 0 outside.
    double pdf(double x) const;
    // F^{-1}(p) for p in [0,1]; p in {0,1} maps to the support endpoints
    // (infinite for unbounded kinds).
    double quantile(double p) const;

    // Deterministic given (seed, n): draw i depends only on (seed, i).
    std::vector<double> sample(std::uint64_t seed, std::size_t n) const;
    double sample_one(std::uint64_t seed, std::uint64_t index) const;

    nlohmann::json to_json() const;
    static ValuationDistribution from_json(const nlohmann::json& j);

    bool operator==(const ValuationDistribution& other) const = default;

private:
    ValuationDistribution(DistKind kind, double p1, double p2);

    DistKind kind_;
    double p1_;
    double p2_;
};

// Distribution of the highest of `rivals` i.i.d. draws: G = F^rivals.
class OrderStatisticDistribution {
public:
    OrderStatisticDistribution(ValuationDistribution base, int rivals);

    const ValuationDistribution& base() const { return base_; }
    int rivals() const { return rivals_; }

    double cdf(double y) const;  // G(y) = F(y)^rivals
    double pdf(double y) const;  // g(y) = rivals * F(y)^{rivals-1} f(y)

private:
    ValuationDistribution base_;
    int rivals_;
};

// G for the highest rival valuation among M-1 others; M >= 2.
OrderStatisticDistribution order_stat(const ValuationDistribution& dist, int total_bidders);

}  // namespace auctionkit
