#include "auctionkit/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "auctionkit/asymmetric.hpp"
#include "auctionkit/bidder_count.hpp"
#include "auctionkit/distributions.hpp"
#include "auctionkit/equilibrium.hpp"
#include "auctionkit/harness.hpp"
#include "auctionkit/interdependent.hpp"
#include "auctionkit/surrogate.hpp"

namespace auctionkit {

namespace {

using nlohmann::json;

// RFC-4180: quote a field when it contains a comma, quote, or newline.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::string num_field(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return csv_field(ss.str());
}

// Distribution flags shared by the bid/reserve/simulate subcommands.
struct DistArgs {
    std::string kind = "uniform";
    double omega = 1.0;
    double mu = 0.0;
    double sigma = 1.0;
    double mu0 = 0.5;
    double sigma0 = 0.5;
    std::string params_json;

    void attach(CLI::App* cmd) {
        cmd->add_option("--dist", kind,
                        "distribution kind: uniform | lognormal | irwinhall2 | foldednormal");
        cmd->add_option("--omega", omega, "uniform upper bound");
        cmd->add_option("--mu", mu, "log-normal mu");
        cmd->add_option("--sigma", sigma, "log-normal sigma");
        cmd->add_option("--mu0", mu0, "folded-normal location");
        cmd->add_option("--sigma0", sigma0, "folded-normal scale");
        cmd->add_option("--params", params_json,
                        "distribution as JSON {\"kind\":...,\"params\":{...}} "
                        "(overrides the individual flags)");
    }

    ValuationDistribution build() const {
        if (!params_json.empty()) return ValuationDistribution::from_json(json::parse(params_json));
        switch (dist_kind_from_string(kind)) {
            case DistKind::uniform: return ValuationDistribution::uniform(omega);
            case DistKind::log_normal: return ValuationDistribution::log_normal(mu, sigma);
            case DistKind::irwin_hall2: return ValuationDistribution::irwin_hall2();
            case DistKind::folded_normal: return ValuationDistribution::folded_normal(mu0, sigma0);
        }
        throw std::invalid_argument("unknown distribution kind");
    }
};

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file: " + path);
    return file;
}

json bid_to_json(const BidResult& res) {
    json j{{"bid", res.bid}, {"method", to_string(res.method)}};
    j["est_error"] = res.est_error ? json(*res.est_error) : json(nullptr);
    return j;
}

// A JSON config file supplies defaults for any long flag of the chosen
// subcommand; explicit command-line flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string config_path;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            ++i;
        } else {
            out.push_back(args[i]);
        }
    }
    if (config_path.empty()) return out;

    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
    json cfg = json::parse(in);
    if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");

    std::vector<std::string> extra;
    for (auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        bool already = false;
        for (const std::string& a : out)
            if (a == flag || a.rfind(flag + "=", 0) == 0) already = true;
        if (already) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back(flag);
        } else {
            extra.push_back(flag);
            extra.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    // appended at the end: subcommands parse them in place, and options of
    // the top-level app reach it through fallthrough
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
}

int run_check();

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"first-price sealed-bid auction toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "print help for every subcommand");

    QuadratureSpec quad;
    app.add_option("--abs-tol", quad.abs_tol, "quadrature absolute tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--rel-tol", quad.rel_tol, "quadrature relative tolerance")
        ->check(CLI::PositiveNumber);
    std::string config_note;
    app.add_option("--config", config_note, "JSON file supplying defaults for any flag");

    // bid -----------------------------------------------------------------
    auto* bid_cmd = app.add_subcommand("bid", "equilibrium bid for one valuation");
    DistArgs bid_dist;
    bid_dist.attach(bid_cmd);
    int bid_bidders = 2;
    double bid_reserve = 0.0;
    double bid_valuation = 0.0;
    std::string bid_method = "closed";
    std::string bid_pmf;
    bool paper_literal = false;
    bid_cmd->add_option("--bidders", bid_bidders, "number of bidders M")->check(CLI::Range(2, 1000000));
    bid_cmd->add_option("--reserve", bid_reserve, "reserve price r");
    bid_cmd->add_option("--valuation", bid_valuation, "bidder valuation x")->required();
    bid_cmd->add_option("--method", bid_method, "closed | quad | approx");
    bid_cmd->add_option("--pmf", bid_pmf,
                        "'symmetric' switches to the bidder-count mixture bid");
    bid_cmd->add_flag("--paper-literal", paper_literal,
                      "evaluate the published (M+1)/M uniform-reserve coefficient, which "
                      "breaks beta(r)=r; for comparison only");

    // pmf -----------------------------------------------------------------
    auto* pmf_cmd = app.add_subcommand("pmf", "symmetric bidder-count probabilities as CSV");
    int pmf_bidders = 2;
    std::string pmf_out;
    pmf_cmd->add_option("--bidders", pmf_bidders, "maximum total bidders M")->required();
    pmf_cmd->add_option("--out", pmf_out, "output CSV path (default stdout)");

    // reserve ---------------------------------------------------------------
    auto* reserve_cmd = app.add_subcommand("reserve", "optimal reserve price for the seller");
    DistArgs reserve_dist;
    reserve_dist.attach(reserve_cmd);
    double seller_value = 0.0;
    reserve_cmd->add_option("--seller-value", seller_value, "seller's own valuation x_s");

    // asym ------------------------------------------------------------------
    auto* asym_cmd = app.add_subcommand("asym", "two-group asymmetric inverse bid table as CSV");
    double omega1 = 1.0, omega2 = 1.0;
    int asym_rivals = 0, asym_bidders = 2, asym_steps = 4096;
    std::string asym_out;
    asym_cmd->add_option("--omega1", omega1, "group-1 uniform upper bound");
    asym_cmd->add_option("--omega2", omega2, "group-2 uniform upper bound");
    asym_cmd->add_option("--group1-rivals", asym_rivals,
                         "rivals with F1 faced by a group-1 bidder (K)");
    asym_cmd->add_option("--bidders", asym_bidders, "total bidders M")->required();
    asym_cmd->add_option("--steps", asym_steps, "integration steps");
    asym_cmd->add_option("--out", asym_out, "output CSV path (default stdout)");

    // interdep ----------------------------------------------------------------
    auto* inter_cmd = app.add_subcommand("interdep", "affiliated interdependent-value bid");
    double alpha = 0.5, xi = 0.5, inter_reserve = 0.0, inter_valuation = 0.0;
    int inter_bidders = 2, curve_points = 64;
    std::string inter_pmf, emit_curve, inter_method = "quad";
    inter_cmd->add_option("--alpha", alpha, "weight on the own signal");
    inter_cmd->add_option("--xi", xi, "weight on the highest rival signal");
    inter_cmd->add_option("--bidders", inter_bidders, "number of bidders M");
    inter_cmd->add_option("--reserve", inter_reserve, "reserve price r");
    inter_cmd->add_option("--valuation", inter_valuation, "bidder signal x");
    inter_cmd->add_option("--method", inter_method, "quad | closed (no-reserve only)");
    inter_cmd->add_option("--pmf", inter_pmf, "'symmetric' mixes over bidder counts");
    inter_cmd->add_option("--emit-curve", emit_curve, "write (x, beta) CSV to this path");
    inter_cmd->add_option("--grid", curve_points, "points for --emit-curve");

    // fit -----------------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "regression surrogate study");
    std::size_t fit_n = 5000;
    double accu = 0.5;
    std::uint64_t fit_seed = 1, holdout_seed = 2;
    std::string table_out, table_in, model_out;
    int fit_order = 1, fit_buckets = 1;
    bool use_m_minus_1 = false;
    fit_cmd->add_option("--n", fit_n, "design rows to sample");
    fit_cmd->add_option("--accu", accu, "folded-normal scale (accuParam)");
    fit_cmd->add_option("--seed", fit_seed, "training sample seed");
    fit_cmd->add_option("--holdout-seed", holdout_seed, "holdout sample seed");
    fit_cmd->add_option("--table", table_out, "write the training table CSV here");
    fit_cmd->add_option("--in", table_in, "fit a previously written table instead of sampling");
    fit_cmd->add_option("--model", model_out, "write the fitted model JSON here");
    fit_cmd->add_option("--order", fit_order, "linear benchmark order");
    fit_cmd->add_option("--buckets", fit_buckets, "separate power fits per x-bucket");
    fit_cmd->add_flag("--use-m-minus-1", use_m_minus_1, "regress on M-1 instead of M");

    // simulate ----------------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo auction rounds");
    DistArgs sim_dist;
    sim_dist.attach(sim_cmd);
    int sim_bidders = 2;
    double sim_reserve = 0.0, sim_seller_value = 0.0;
    std::size_t rounds = 100000;
    std::uint64_t sim_seed = 1;
    std::string strategy_name = "equilibrium";
    sim_cmd->add_option("--bidders", sim_bidders, "number of bidders M");
    sim_cmd->add_option("--reserve", sim_reserve, "reserve price r");
    sim_cmd->add_option("--seller-value", sim_seller_value, "seller's valuation x_s");
    sim_cmd->add_option("--rounds", rounds, "number of auction rounds");
    sim_cmd->add_option("--seed", sim_seed, "RNG seed (AUCTIONKIT_SEED overrides)");
    sim_cmd->add_option("--strategy", strategy_name, "equilibrium | truthful");

    // check -----------------------------------------------------------------
    app.add_subcommand("check", "run the quick invariant suite");

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(args);
        std::vector<const char*> cargs;
        for (const std::string& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (const char* env_seed = std::getenv("AUCTIONKIT_SEED")) {
            sim_seed = std::stoull(env_seed);
            fit_seed = std::stoull(env_seed);
        }

        if (bid_cmd->parsed()) {
            ValuationDistribution dist = bid_dist.build();
            BidResult res;
            if (!bid_pmf.empty()) {
                if (bid_pmf != "symmetric")
                    throw std::invalid_argument("only --pmf symmetric is available");
                BidderCountPMF pmf = discrete_symmetric_pmf(bid_bidders);
                res = bid_uncertain(pmf, dist, bid_valuation, quad);
            } else if (bid_method == "approx") {
                if (dist.kind() != DistKind::log_normal)
                    throw std::invalid_argument("--method approx applies to log-normal only");
                res = bid_lognormal_approx(bid_valuation,
                                           AuctionSpec{bid_bidders, dist, 0.0, 0.0}, quad);
            } else if (bid_method == "quad") {
                AuctionSpec spec{bid_bidders, dist, bid_reserve, 0.0};
                res = bid_reserve > 0.0 ? bid_reserve_general(spec, bid_valuation, quad)
                                        : bid_general(spec, bid_valuation, quad);
            } else if (bid_method == "closed") {
                if (dist.kind() == DistKind::uniform) {
                    res = bid_reserve > 0.0
                              ? bid_reserve_uniform(bid_bidders, bid_reserve, bid_valuation,
                                                    dist.support_hi(), paper_literal)
                              : bid_uniform(bid_bidders, bid_valuation, dist.support_hi());
                } else if (dist.kind() == DistKind::log_normal && bid_reserve > 0.0) {
                    res = bid_reserve_lognormal(dist.param1(), dist.param2(), bid_bidders,
                                                bid_reserve, bid_valuation, quad);
                } else {
                    AuctionSpec spec{bid_bidders, dist, bid_reserve, 0.0};
                    res = bid_reserve > 0.0 ? bid_reserve_general(spec, bid_valuation, quad)
                                            : bid_general(spec, bid_valuation, quad);
                }
            } else {
                throw std::invalid_argument("unknown --method: " + bid_method);
            }
            std::cout << bid_to_json(res).dump() << "\n";
            return 0;
        }

        if (pmf_cmd->parsed()) {
            BidderCountPMF pmf = discrete_symmetric_pmf(pmf_bidders);
            std::ofstream file;
            std::ostream& out = open_or_stdout(file, pmf_out);
            out << "l,p\n";
            for (int l = 0; l < pmf.max_bidders; ++l)
                out << l << ',' << num_field(pmf.p[l]) << "\n";
            return 0;
        }

        if (reserve_cmd->parsed()) {
            double r_star = optimal_reserve(reserve_dist.build(), seller_value);
            std::cout << json{{"r_star", r_star}}.dump() << "\n";
            return 0;
        }

        if (asym_cmd->parsed()) {
            TwoGroupSpec spec{ValuationDistribution::uniform(omega1),
                              ValuationDistribution::uniform(omega2), asym_rivals, asym_bidders};
            InverseBidTable table = solve_two_group(spec, asym_steps);
            std::ofstream file;
            std::ostream& out = open_or_stdout(file, asym_out);
            out << "b,phi1,phi2\n";
            for (std::size_t i = 0; i < table.bid.size(); ++i)
                out << num_field(table.bid[i]) << ',' << num_field(table.phi1[i]) << ','
                    << num_field(table.phi2[i]) << "\n";
            return 0;
        }

        if (inter_cmd->parsed()) {
            InterdepSpec spec{inter_bidders, alpha, xi, inter_reserve};
            auto eval = [&](double x) {
                if (!inter_pmf.empty()) {
                    if (inter_pmf != "symmetric")
                        throw std::invalid_argument("only --pmf symmetric is available");
                    BidderCountPMF pmf = discrete_symmetric_pmf(inter_bidders);
                    return bid_combined_uncertain(pmf, spec, x, quad);
                }
                if (spec.reserve > 0.0) return bid_combined(spec, x, quad);
                return inter_method == "closed" ? bid_irwinhall_closed(spec, x, quad)
                                                : bid_interdependent(spec, x, quad);
            };
            if (!emit_curve.empty()) {
                std::ofstream file(emit_curve);
                if (!file) throw std::invalid_argument("cannot open output file: " + emit_curve);
                file << "x,beta\n";
                double lo = spec.reserve > 0.0 ? x_star(spec, quad) : 0.0;
                for (int i = 0; i <= curve_points; ++i) {
                    double x = lo + (2.0 - lo) * i / curve_points;
                    file << num_field(x) << ',' << num_field(eval(x).bid) << "\n";
                }
                return 0;
            }
            std::cout << bid_to_json(eval(inter_valuation)).dump() << "\n";
            return 0;
        }

        if (fit_cmd->parsed()) {
            DesignConfig cfg;
            cfg.accu_param = accu;
            cfg.use_m_minus_1 = use_m_minus_1;
            DesignTable table;
            if (!table_in.empty()) {
                std::ifstream in(table_in);
                if (!in) throw std::invalid_argument("cannot open table: " + table_in);
                table = read_design_csv(in);
            } else {
                table = sample_design(fit_n, fit_seed, cfg, quad);
            }
            if (!table_out.empty()) {
                std::ofstream out(table_out);
                if (!out) throw std::invalid_argument("cannot open output file: " + table_out);
                write_design_csv(out, table);
            }

            DesignTable holdout = sample_design(fit_n, holdout_seed, cfg, quad);
            json result;
            if (fit_buckets > 1) {
                BucketedPowerFit fit = fit_power_bucketed(table, fit_buckets, use_m_minus_1);
                json models = json::array();
                for (const SurrogateModel& m : fit.models) models.push_back(m.to_json());
                result["bucket_models"] = models;
                result["buckets"] = fit_buckets;
                result["power_corr_out"] = evaluate(fit, holdout).corr;
            } else {
                SurrogateModel power = fit_power(table, use_m_minus_1);
                LinearModel linear = fit_linear(table, fit_order);
                EvalReport power_out = evaluate(power, holdout);
                EvalReport linear_out = evaluate(linear, holdout);
                result = power.to_json();
                result["diagnostics"]["fit_corr_out"] = power_out.corr;
                result["diagnostics"]["mean_rel_error_out"] = power_out.mean_rel_error;
                result["linear"] = {{"coef", linear.coef},
                                    {"order", linear.order},
                                    {"fit_corr_in", linear.fit_corr_in},
                                    {"fit_corr_out", linear_out.corr},
                                    {"frac_negative_out", linear_out.frac_negative}};
                result["diagnostics"]["rejected_draws"] = table.rejected_draws;
                result["diagnostics"]["failed_rows"] = table.failed_rows;
                if (!model_out.empty()) {
                    std::ofstream out(model_out);
                    if (!out) throw std::invalid_argument("cannot open model file: " + model_out);
                    out << power.to_json().dump(2) << "\n";
                }
            }
            std::cout << result.dump() << "\n";
            return 0;
        }

        if (sim_cmd->parsed()) {
            AuctionSpec spec{sim_bidders, sim_dist.build(), sim_reserve, sim_seller_value};
            BidStrategy strategy;
            if (strategy_name == "equilibrium") {
                strategy = equilibrium_strategy(spec);
            } else if (strategy_name == "truthful") {
                strategy = [](double x) { return x; };
            } else {
                throw std::invalid_argument("unknown --strategy: " + strategy_name);
            }
            SimulationReport rep = simulate(spec, strategy, rounds, sim_seed);
            json j{{"rounds", rep.rounds},
                   {"mean_revenue", rep.mean_revenue},
                   {"revenue_std_error", rep.revenue_std_error},
                   {"mean_payment_per_bidder", rep.mean_payment_per_bidder},
                   {"win_rate", rep.win_rate},
                   {"no_sale_rate", rep.no_sale_rate},
                   {"mean_seller_payoff", rep.mean_seller_payoff},
                   {"seed", rep.seed}};
            std::cout << j.dump() << "\n";
            return 0;
        }

        if (app.got_subcommand("check")) return run_check();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

namespace {

// Quick cross-module invariants; `check` exits nonzero on the first miss.
int run_check() {
    int failures = 0;
    auto expect = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        if (!ok) ++failures;
    };

    bool pmf_ok = true;
    for (int m = 2; m <= 1000; ++m) {
        BidderCountPMF pmf = discrete_symmetric_pmf(m);
        double sum = 0.0;
        for (double p : pmf.p) sum += p;
        if (std::fabs(sum - 1.0) > 1e-12) pmf_ok = false;
        if (delta_p_denominator_floor(m) != delta_p_denominator_mod(m)) pmf_ok = false;
    }
    expect(pmf_ok, "symmetric bidder-count PMF normalizes for M = 2..1000");

    bool closed_ok = true;
    for (int m : {2, 5}) {
        for (int i = 1; i <= 8; ++i) {
            double x = i / 8.0;
            AuctionSpec spec{m, ValuationDistribution::uniform(1.0), 0.0, 0.0};
            if (std::fabs(bid_general(spec, x).bid - bid_uniform(m, x, 1.0).bid) > 1e-6)
                closed_ok = false;
        }
    }
    expect(closed_ok, "uniform closed form matches quadrature");

    bool reserve_ok = true;
    for (int m : {2, 3, 7}) {
        AuctionSpec spec{m, ValuationDistribution::uniform(1.0), 0.4, 0.0};
        if (std::fabs(bid_reserve_general(spec, 0.4).bid - 0.4) > 1e-8) reserve_ok = false;
        if (std::fabs(bid_reserve_uniform(m, 0.4, 0.4, 1.0).bid - 0.4) > 1e-12)
            reserve_ok = false;
    }
    expect(reserve_ok, "reserve boundary beta(r) = r");

    bool interdep_ok = true;
    for (int m : {2, 3, 5}) {
        InterdepSpec spec{m, 0.5, 0.5, 0.0};
        for (int i = 1; i <= 10; ++i) {
            double x = 0.2 * i;
            if (std::fabs(bid_interdependent(spec, x).bid - bid_irwinhall_closed(spec, x).bid) >
                1e-6)
                interdep_ok = false;
        }
    }
    expect(interdep_ok, "interdependent closed form matches quadrature");

    bool quantile_ok = true;
    auto ln = ValuationDistribution::log_normal(0.0, 1.0);
    auto un = ValuationDistribution::uniform(2.0);
    for (int i = 1; i < 20; ++i) {
        double p = i / 20.0;
        if (std::fabs(ln.cdf(ln.quantile(p)) - p) > 1e-9) quantile_ok = false;
        if (std::fabs(un.cdf(un.quantile(p)) - p) > 1e-9) quantile_ok = false;
    }
    expect(quantile_ok, "quantile/cdf round trip");

    std::cout << (failures == 0 ? "all checks passed\n" : "checks failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

}  // namespace auctionkit
