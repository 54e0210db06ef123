#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "auctionkit/common.hpp"
#include "auctionkit/numerics.hpp"

namespace auctionkit {

// Sampling configuration for the regression study. Valuation x and
// log-normal parameters mu, sigma are drawn from folded normals centered
// at value_loc with scale accu_param; the bidder count is the ceiling of a
// folded-normal draw, floored at 2.
struct DesignConfig {
    double accu_param = 0.5;   // folded-normal scale for x, mu, sigma
    double value_loc = 0.5;    // folded-normal location for x, mu, sigma
    double bidders_loc = 4.0;  // location of the bidder-count draw
    double bidders_scale_factor = 4.0;  // bidder scale = factor * accu_param
    bool use_m_minus_1 = false;         // regress on M-1 instead of M

    void validate() const;
};

struct DesignRow {
    double bid = 0.0;
    double x = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    int bidders = 2;
};

struct DesignTable {
    std::vector<DesignRow> rows;
    double accu_param = 0.5;
    std::uint64_t seed = 0;
    std::size_t rejected_draws = 0;  // nonpositive parameter draws, redrawn
    std::size_t failed_rows = 0;     // quadrature failures / vanishing bids, excluded
};

// Draw n parameter rows and price each with the log-normal quadrature bid.
// Row i uses its own RNG substream, so tables are identical across runs
// and row-level parallelism cannot change them.
DesignTable sample_design(std::size_t n, std::uint64_t seed, const DesignConfig& cfg = {},
                          const QuadratureSpec& quad = {});

// Power surrogate bid = C x^{a1} mu^{a2} sigma^{a3} M^{a4}, fitted by
// ordinary least squares in logs (the model is exactly linear there).
struct SurrogateModel {
    double C = 0.0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    bool use_m_minus_1 = false;
    double fit_corr_in = 0.0;   // level correlation on the training table
    std::size_t n_train = 0;

    double predict(const DesignRow& row) const;
    nlohmann::json to_json() const;
    static SurrogateModel from_json(const nlohmann::json& j);
};

// Linear benchmark bid = b0 + sum_k [b x^k + b sigma^k + b mu^k + b (M-1)^k]
// up to the given order; predictions can go negative, which is reported,
// not clamped.
struct LinearModel {
    std::vector<double> coef;  // intercept, then per-order blocks x,sigma,mu,M-1
    int order = 1;
    double fit_corr_in = 0.0;
    std::size_t n_train = 0;

    double predict(const DesignRow& row) const;
};

SurrogateModel fit_power(const DesignTable& table, bool use_m_minus_1 = false);
LinearModel fit_linear(const DesignTable& table, int order = 1);

// Separate power fits per x-bucket (equal-count buckets by training x);
// a row is predicted by the model of the bucket its x falls in.
struct BucketedPowerFit {
    std::vector<double> upper_bounds;  // ascending; last is +inf
    std::vector<SurrogateModel> models;

    double predict(const DesignRow& row) const;
};

BucketedPowerFit fit_power_bucketed(const DesignTable& table, int buckets,
                                    bool use_m_minus_1 = false);

struct EvalReport {
    double corr = 0.0;            // level correlation predicted vs actual
    double mean_rel_error = 0.0;  // mean |pred - bid| / bid
    double frac_negative = 0.0;   // fraction of negative predictions
    std::size_t n = 0;
};

EvalReport evaluate(const SurrogateModel& model, const DesignTable& holdout);
EvalReport evaluate(const LinearModel& model, const DesignTable& holdout);
EvalReport evaluate(const BucketedPowerFit& model, const DesignTable& holdout);

// CSV round-trip with the fixed header "bid,x,mu,sigma,M".
void write_design_csv(std::ostream& out, const DesignTable& table);
DesignTable read_design_csv(std::istream& in);

}  // namespace auctionkit
