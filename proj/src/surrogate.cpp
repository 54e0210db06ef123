#include "auctionkit/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "auctionkit/distributions.hpp"
#include "auctionkit/equilibrium.hpp"
#include "auctionkit/rng.hpp"

namespace auctionkit {

void DesignConfig::validate() const {
    if (!(accu_param > 0.0)) throw std::invalid_argument("accu_param must be positive");
    if (!(value_loc > 0.0)) throw std::invalid_argument("value_loc must be positive");
    if (!(bidders_loc > 0.0) || !(bidders_scale_factor > 0.0))
        throw std::invalid_argument("bidder-count draw parameters must be positive");
}

namespace {

// Streams within a row's substream: one per parameter, so a rejected draw
// advances only its own parameter's counter.
enum RowStream : std::uint64_t { kValuation = 1, kMu = 2, kSigma = 3, kBidders = 4 };

double folded_draw(std::uint64_t seed, std::uint64_t row, RowStream stream, std::uint64_t attempt,
                   double loc, double scale) {
    double u = u01(seed, mix_bits(row, stream), attempt);
    return std::fabs(loc + scale * norm_quantile(u));
}

double positive_draw(std::uint64_t seed, std::uint64_t row, RowStream stream, double loc,
                     double scale, std::size_t& rejected) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        double v = folded_draw(seed, row, stream, attempt, loc, scale);
        if (v > 0.0) return v;
        ++rejected;  // measure-zero event, but the log transform cannot take 0
    }
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("correlation needs at least two points");
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        throw NumericalError("correlation undefined: a series is constant");
    return sab / std::sqrt(saa * sbb);
}

// A constant bid column makes the correlation diagnostic undefined; the
// fit itself is still fine, so record 0 instead of failing.
double pearson_or_zero(const std::vector<double>& a, const std::vector<double>& b) {
    try {
        return pearson(a, b);
    } catch (const NumericalError&) {
        return 0.0;
    }
}

// Least squares through column-pivoted QR; rank deficiency is reported
// with the offending columns named.
Eigen::VectorXd solve_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const std::vector<std::string>& column_names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) {
        std::ostringstream msg;
        msg << "rank-deficient design (rank " << qr.rank() << " of " << X.cols()
            << "); dependent columns:";
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < X.cols(); ++i)
            msg << " " << column_names[perm[i]];
        throw std::invalid_argument(msg.str());
    }
    return qr.solve(y);
}

}  // namespace

DesignTable sample_design(std::size_t n, std::uint64_t seed, const DesignConfig& cfg,
                          const QuadratureSpec& quad) {
    if (n < 10) throw std::invalid_argument("design table needs at least 10 rows");
    cfg.validate();

    DesignTable table;
    table.rows.reserve(n);
    table.accu_param = cfg.accu_param;
    table.seed = seed;

    const double bidder_scale = cfg.bidders_scale_factor * cfg.accu_param;
    for (std::size_t i = 0; i < n; ++i) {
        DesignRow row;
        row.x = positive_draw(seed, i, kValuation, cfg.value_loc, cfg.accu_param,
                              table.rejected_draws);
        row.mu = positive_draw(seed, i, kMu, cfg.value_loc, cfg.accu_param,
                               table.rejected_draws);
        row.sigma = positive_draw(seed, i, kSigma, cfg.value_loc, cfg.accu_param,
                                  table.rejected_draws);
        double m_draw = folded_draw(seed, i, kBidders, 0, cfg.bidders_loc, bidder_scale);
        row.bidders = std::max(2, static_cast<int>(std::ceil(m_draw)));

        try {
            AuctionSpec spec{row.bidders, ValuationDistribution::log_normal(row.mu, row.sigma),
                             0.0, 0.0};
            row.bid = bid_general(spec, row.x, quad).bid;
        } catch (const NumericalError&) {
            ++table.failed_rows;
            continue;
        }
        if (!(row.bid > 0.0) || !std::isfinite(row.bid)) {
            // deep-tail valuations can shade the bid to numerical zero,
            // which the log-space fit cannot use
            ++table.failed_rows;
            continue;
        }
        table.rows.push_back(row);
    }
    return table;
}

double SurrogateModel::predict(const DesignRow& row) const {
    double m = use_m_minus_1 ? row.bidders - 1.0 : row.bidders;
    return C * std::pow(row.x, a1) * std::pow(row.mu, a2) * std::pow(row.sigma, a3) *
           std::pow(m, a4);
}

nlohmann::json SurrogateModel::to_json() const {
    return {{"C", C},   {"a1", a1}, {"a2", a2},
            {"a3", a3}, {"a4", a4}, {"use_m_minus_1", use_m_minus_1},
            {"diagnostics", {{"fit_corr_in", fit_corr_in}, {"n_train", n_train}}}};
}

SurrogateModel SurrogateModel::from_json(const nlohmann::json& j) {
    SurrogateModel m;
    m.C = j.at("C").get<double>();
    m.a1 = j.at("a1").get<double>();
    m.a2 = j.at("a2").get<double>();
    m.a3 = j.at("a3").get<double>();
    m.a4 = j.at("a4").get<double>();
    m.use_m_minus_1 = j.value("use_m_minus_1", false);
    if (j.contains("diagnostics")) {
        m.fit_corr_in = j["diagnostics"].value("fit_corr_in", 0.0);
        m.n_train = j["diagnostics"].value("n_train", std::size_t{0});
    }
    return m;
}

double LinearModel::predict(const DesignRow& row) const {
    double acc = coef[0];
    std::size_t idx = 1;
    for (int k = 1; k <= order; ++k) {
        acc += coef[idx++] * std::pow(row.x, k);
        acc += coef[idx++] * std::pow(row.sigma, k);
        acc += coef[idx++] * std::pow(row.mu, k);
        acc += coef[idx++] * std::pow(row.bidders - 1.0, k);
    }
    return acc;
}

SurrogateModel fit_power(const DesignTable& table, bool use_m_minus_1) {
    const std::size_t n = table.rows.size();
    if (n < 5) throw std::invalid_argument("power fit needs at least 5 rows");

    Eigen::MatrixXd X(n, 5);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DesignRow& r = table.rows[i];
        double m = use_m_minus_1 ? r.bidders - 1.0 : r.bidders;
        X(i, 0) = 1.0;
        X(i, 1) = std::log(r.x);
        X(i, 2) = std::log(r.mu);
        X(i, 3) = std::log(r.sigma);
        X(i, 4) = std::log(m);
        y(i) = std::log(r.bid);
    }
    Eigen::VectorXd beta =
        solve_ols(X, y, {"intercept", "ln x", "ln mu", "ln sigma", "ln M"});

    SurrogateModel model;
    model.C = std::exp(beta(0));
    model.a1 = beta(1);
    model.a2 = beta(2);
    model.a3 = beta(3);
    model.a4 = beta(4);
    model.use_m_minus_1 = use_m_minus_1;
    model.n_train = n;

    std::vector<double> actual(n), predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
        actual[i] = table.rows[i].bid;
        predicted[i] = model.predict(table.rows[i]);
    }
    model.fit_corr_in = pearson_or_zero(actual, predicted);
    return model;
}

LinearModel fit_linear(const DesignTable& table, int order) {
    const std::size_t n = table.rows.size();
    if (n < 5) throw std::invalid_argument("linear fit needs at least 5 rows");
    if (order < 1) throw std::invalid_argument("linear fit order must be >= 1");

    const int cols = 1 + 4 * order;
    Eigen::MatrixXd X(n, cols);
    Eigen::VectorXd y(n);
    std::vector<std::string> names{"intercept"};
    for (int k = 1; k <= order; ++k) {
        for (const char* base : {"x", "sigma", "mu", "M-1"})
            names.push_back(k == 1 ? std::string(base)
                                   : std::string(base) + "^" + std::to_string(k));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const DesignRow& r = table.rows[i];
        X(i, 0) = 1.0;
        int idx = 1;
        for (int k = 1; k <= order; ++k) {
            X(i, idx++) = std::pow(r.x, k);
            X(i, idx++) = std::pow(r.sigma, k);
            X(i, idx++) = std::pow(r.mu, k);
            X(i, idx++) = std::pow(r.bidders - 1.0, k);
        }
        y(i) = r.bid;
    }
    Eigen::VectorXd beta = solve_ols(X, y, names);

    LinearModel model;
    model.coef.assign(beta.data(), beta.data() + beta.size());
    model.order = order;
    model.n_train = n;

    std::vector<double> actual(n), predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
        actual[i] = table.rows[i].bid;
        predicted[i] = model.predict(table.rows[i]);
    }
    model.fit_corr_in = pearson_or_zero(actual, predicted);
    return model;
}

double BucketedPowerFit::predict(const DesignRow& row) const {
    for (std::size_t i = 0; i < upper_bounds.size(); ++i)
        if (row.x <= upper_bounds[i]) return models[i].predict(row);
    return models.back().predict(row);
}

BucketedPowerFit fit_power_bucketed(const DesignTable& table, int buckets, bool use_m_minus_1) {
    if (buckets < 1) throw std::invalid_argument("bucket count must be >= 1");
    const std::size_t n = table.rows.size();
    if (n < static_cast<std::size_t>(5 * buckets))
        throw std::invalid_argument("too few rows for the requested bucket count");

    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = table.rows[i].x;
    std::sort(xs.begin(), xs.end());

    BucketedPowerFit fit;
    fit.upper_bounds.resize(buckets);
    for (int b = 0; b < buckets - 1; ++b)
        fit.upper_bounds[b] = xs[(b + 1) * n / buckets];
    fit.upper_bounds[buckets - 1] = std::numeric_limits<double>::infinity();

    double lower = -std::numeric_limits<double>::infinity();
    for (int b = 0; b < buckets; ++b) {
        DesignTable slice;
        slice.accu_param = table.accu_param;
        slice.seed = table.seed;
        for (const DesignRow& r : table.rows)
            if (r.x > lower && r.x <= fit.upper_bounds[b]) slice.rows.push_back(r);
        fit.models.push_back(fit_power(slice, use_m_minus_1));
        lower = fit.upper_bounds[b];
    }
    return fit;
}

namespace {

template <typename Model>
EvalReport evaluate_impl(const Model& model, const DesignTable& holdout) {
    if (holdout.rows.empty()) throw std::invalid_argument("empty holdout table");
    const std::size_t n = holdout.rows.size();
    std::vector<double> actual(n), predicted(n);
    double rel = 0.0;
    std::size_t negative = 0;
    for (std::size_t i = 0; i < n; ++i) {
        actual[i] = holdout.rows[i].bid;
        predicted[i] = model.predict(holdout.rows[i]);
        rel += std::fabs(predicted[i] - actual[i]) / actual[i];
        if (predicted[i] < 0.0) ++negative;
    }
    EvalReport rep;
    rep.corr = pearson(actual, predicted);
    rep.mean_rel_error = rel / n;
    rep.frac_negative = static_cast<double>(negative) / n;
    rep.n = n;
    return rep;
}

}  // namespace

EvalReport evaluate(const SurrogateModel& model, const DesignTable& holdout) {
    return evaluate_impl(model, holdout);
}

EvalReport evaluate(const LinearModel& model, const DesignTable& holdout) {
    return evaluate_impl(model, holdout);
}

EvalReport evaluate(const BucketedPowerFit& model, const DesignTable& holdout) {
    return evaluate_impl(model, holdout);
}

void write_design_csv(std::ostream& out, const DesignTable& table) {
    out << "bid,x,mu,sigma,M\n";
    out.precision(17);
    for (const DesignRow& r : table.rows)
        out << r.bid << ',' << r.x << ',' << r.mu << ',' << r.sigma << ',' << r.bidders << '\n';
}

DesignTable read_design_csv(std::istream& in) {
    DesignTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty design CSV");
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "bid,x,mu,sigma,M")
        throw std::invalid_argument("design CSV must start with header bid,x,mu,sigma,M");
    while (std::getline(in, line)) {
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        DesignRow row;
        char comma;
        std::istringstream ss(line);
        if (!(ss >> row.bid >> comma >> row.x >> comma >> row.mu >> comma >> row.sigma >> comma >>
              row.bidders))
            throw std::invalid_argument("malformed design CSV row: " + line);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace auctionkit
