#include "auctionkit/distributions.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "auctionkit/rng.hpp"

namespace auctionkit {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Irwin-Hall-2 CDF on [0,2]: x^2/2 below the knot, 2x - 1 - x^2/2 above.
double irwin_hall2_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 2.0) return 1.0;
    if (x < 1.0) return 0.5 * x * x;
    return 2.0 * x - 1.0 - 0.5 * x * x;
}

double irwin_hall2_pdf(double x) {
    if (x < 0.0 || x > 2.0) return 0.0;
    return x < 1.0 ? x : 2.0 - x;
}

double irwin_hall2_quantile(double p) {
    if (p <= 0.5) return std::sqrt(2.0 * p);
    return 2.0 - std::sqrt(2.0 * (1.0 - p));
}

}  // namespace

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / kSqrt2);
}

double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / kSqrt2Pi;
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("norm_quantile: p must lie in (0,1)");

    // Acklam's rational approximation...
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // ...sharpened to near machine precision by Halley steps on
    // norm_cdf(x) - p.
    for (int i = 0; i < 2; ++i) {
        double e = norm_cdf(x) - p;
        double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

const char* to_string(BidMethod m) {
    switch (m) {
        case BidMethod::closed_form: return "closed_form";
        case BidMethod::quadrature: return "quadrature";
        case BidMethod::taylor_approx: return "taylor_approx";
    }
    return "unknown";
}

const char* to_string(DistKind k) {
    switch (k) {
        case DistKind::uniform: return "uniform";
        case DistKind::log_normal: return "lognormal";
        case DistKind::irwin_hall2: return "irwinhall2";
        case DistKind::folded_normal: return "foldednormal";
    }
    return "unknown";
}

DistKind dist_kind_from_string(const std::string& name) {
    if (name == "uniform") return DistKind::uniform;
    if (name == "lognormal" || name == "log_normal") return DistKind::log_normal;
    if (name == "irwinhall2" || name == "irwin_hall2") return DistKind::irwin_hall2;
    if (name == "foldednormal" || name == "folded_normal") return DistKind::folded_normal;
    throw std::invalid_argument("unknown distribution kind: " + name);
}

ValuationDistribution::ValuationDistribution(DistKind kind, double p1, double p2)
    : kind_(kind), p1_(p1), p2_(p2) {}

ValuationDistribution ValuationDistribution::uniform(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("uniform distribution needs omega > 0");
    return {DistKind::uniform, omega, 0.0};
}

ValuationDistribution ValuationDistribution::log_normal(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu))
        throw std::invalid_argument("log-normal distribution needs finite mu and sigma > 0");
    return {DistKind::log_normal, mu, sigma};
}

ValuationDistribution ValuationDistribution::irwin_hall2() {
    return {DistKind::irwin_hall2, 0.0, 0.0};
}

ValuationDistribution ValuationDistribution::folded_normal(double mu0, double sigma0) {
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0) || !std::isfinite(mu0))
        throw std::invalid_argument("folded normal needs finite mu0 and sigma0 > 0");
    return {DistKind::folded_normal, mu0, sigma0};
}

double ValuationDistribution::support_hi() const {
    switch (kind_) {
        case DistKind::uniform: return p1_;
        case DistKind::irwin_hall2: return 2.0;
        case DistKind::log_normal:
        case DistKind::folded_normal: return kInf;
    }
    return kInf;
}

bool ValuationDistribution::bounded() const {
    return std::isfinite(support_hi());
}

double ValuationDistribution::cdf(double x) const {
    switch (kind_) {
        case DistKind::uniform:
            if (x <= 0.0) return 0.0;
            if (x >= p1_) return 1.0;
            return x / p1_;
        case DistKind::log_normal:
            if (x <= 0.0) return 0.0;  // right limit at the origin
            return norm_cdf((std::log(x) - p1_) / p2_);
        case DistKind::irwin_hall2:
            return irwin_hall2_cdf(x);
        case DistKind::folded_normal:
            if (x <= 0.0) return 0.0;
            return norm_cdf((x - p1_) / p2_) - norm_cdf((-x - p1_) / p2_);
    }
    return 0.0;
}

double ValuationDistribution::pdf(double x) const {
    switch (kind_) {
        case DistKind::uniform:
            return (x < 0.0 || x > p1_) ? 0.0 : 1.0 / p1_;
        case DistKind::log_normal:
            if (x <= 0.0) return 0.0;
            return norm_pdf((std::log(x) - p1_) / p2_) / (x * p2_);
        case DistKind::irwin_hall2:
            return irwin_hall2_pdf(x);
        case DistKind::folded_normal:
            if (x < 0.0) return 0.0;
            return (norm_pdf((x - p1_) / p2_) + norm_pdf((x + p1_) / p2_)) / p2_;
    }
    return 0.0;
}

double ValuationDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("quantile: p must lie in [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return support_hi();
    switch (kind_) {
        case DistKind::uniform:
            return p * p1_;
        case DistKind::log_normal:
            return std::exp(p1_ + p2_ * norm_quantile(p));
        case DistKind::irwin_hall2:
            return irwin_hall2_quantile(p);
        case DistKind::folded_normal: {
            // Monotone CDF with no closed inverse: bisect, then polish
            // with Newton once the bracket is tight.
            double lo = 0.0;
            double hi = p1_ + p2_;
            while (cdf(hi) < p) hi *= 2.0;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                double fm = cdf(mid) - p;
                double dm = pdf(mid);
                if (dm > 0.0) {
                    double newton = mid - fm / dm;
                    if (newton > lo && newton < hi) {
                        double fn = cdf(newton) - p;
                        (fn < 0.0 ? lo : hi) = newton;
                        if (hi - lo < 1e-14 * (1.0 + hi)) break;
                        continue;
                    }
                }
                (fm < 0.0 ? lo : hi) = mid;
                if (hi - lo < 1e-14 * (1.0 + hi)) break;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

double ValuationDistribution::sample_one(std::uint64_t seed, std::uint64_t index) const {
    switch (kind_) {
        case DistKind::uniform:
            return p1_ * u01(seed, index);
        case DistKind::log_normal:
            return std::exp(p1_ + p2_ * norm_quantile(u01(seed, index)));
        case DistKind::irwin_hall2:
            // two uniforms per draw, at indices 2i and 2i+1
            return u01(seed, 2 * index) + u01(seed, 2 * index + 1);
        case DistKind::folded_normal:
            return std::fabs(p1_ + p2_ * norm_quantile(u01(seed, index)));
    }
    return 0.0;
}

std::vector<double> ValuationDistribution::sample(std::uint64_t seed, std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = sample_one(seed, i);
    return out;
}

nlohmann::json ValuationDistribution::to_json() const {
    nlohmann::json params = nlohmann::json::object();
    switch (kind_) {
        case DistKind::uniform: params["omega"] = p1_; break;
        case DistKind::log_normal:
            params["mu"] = p1_;
            params["sigma"] = p2_;
            break;
        case DistKind::irwin_hall2: break;
        case DistKind::folded_normal:
            params["mu0"] = p1_;
            params["sigma0"] = p2_;
            break;
    }
    return {{"kind", to_string(kind_)}, {"params", params}};
}

ValuationDistribution ValuationDistribution::from_json(const nlohmann::json& j) {
    DistKind kind = dist_kind_from_string(j.at("kind").get<std::string>());
    nlohmann::json params = j.value("params", nlohmann::json::object());
    switch (kind) {
        case DistKind::uniform:
            return uniform(params.at("omega").get<double>());
        case DistKind::log_normal:
            return log_normal(params.at("mu").get<double>(), params.at("sigma").get<double>());
        case DistKind::irwin_hall2:
            return irwin_hall2();
        case DistKind::folded_normal:
            return folded_normal(params.value("mu0", 0.5), params.value("sigma0", 0.5));
    }
    throw std::invalid_argument("unreachable distribution kind");
}

OrderStatisticDistribution::OrderStatisticDistribution(ValuationDistribution base, int rivals)
    : base_(std::move(base)), rivals_(rivals) {
    if (rivals_ < 1)
        throw std::invalid_argument("order statistic needs at least one rival");
}

double OrderStatisticDistribution::cdf(double y) const {
    return std::pow(base_.cdf(y), rivals_);
}

double OrderStatisticDistribution::pdf(double y) const {
    double F = base_.cdf(y);
    if (F <= 0.0) return 0.0;
    return rivals_ * std::pow(F, rivals_ - 1) * base_.pdf(y);
}

OrderStatisticDistribution order_stat(const ValuationDistribution& dist, int total_bidders) {
    if (total_bidders < 2)
        throw std::invalid_argument("an auction needs at least two bidders");
    return {dist, total_bidders - 1};
}

}  // namespace auctionkit
