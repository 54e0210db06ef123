#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "auctionkit/distributions.hpp"
#include "auctionkit/rng.hpp"

using namespace auctionkit;

namespace {

// Kolmogorov-Smirnov distance between a sample and the distribution's CDF.
double ks_distance(std::vector<double> sample, const ValuationDistribution& dist) {
    std::sort(sample.begin(), sample.end());
    double d = 0.0;
    const double n = static_cast<double>(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double F = dist.cdf(sample[i]);
        d = std::max(d, std::fabs(F - i / n));
        d = std::max(d, std::fabs(F - (i + 1) / n));
    }
    return d;
}

}  // namespace

TEST_CASE("uniform cdf/pdf closed forms") {
    auto u = ValuationDistribution::uniform(1.0);
    CHECK(u.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.pdf(0.3) == doctest::Approx(1.0));
    CHECK(u.cdf(-0.1) == 0.0);
    CHECK(u.cdf(1.5) == 1.0);
    auto u2 = ValuationDistribution::uniform(4.0);
    CHECK(u2.cdf(1.0) == doctest::Approx(0.25));
    CHECK(u2.pdf(3.0) == doctest::Approx(0.25));
}

TEST_CASE("log-normal median and tail limits") {
    auto ln = ValuationDistribution::log_normal(0.7, 1.3);
    CHECK(ln.cdf(std::exp(0.7)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ln.cdf(0.0) == 0.0);  // right limit at the origin
    CHECK(ln.pdf(0.0) == 0.0);
    CHECK(!ln.bounded());
}

TEST_CASE("irwin-hall-2 piecewise values") {
    auto ih = ValuationDistribution::irwin_hall2();
    CHECK(ih.cdf(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ih.pdf(1.5) == doctest::Approx(0.5));
    CHECK(ih.pdf(1.0) == doctest::Approx(1.0));  // both branches agree at the knot
    CHECK(ih.cdf(0.6) == doctest::Approx(0.18));
    CHECK(ih.cdf(2.0) == 1.0);
    // continuity and differentiability at the knot
    double eps = 1e-7;
    CHECK(ih.cdf(1.0 + eps) - ih.cdf(1.0 - eps) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(ih.pdf(1.0 - eps) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ih.pdf(1.0 + eps) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("construction-time validation") {
    CHECK_THROWS_AS(ValuationDistribution::uniform(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution::uniform(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution::log_normal(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution::log_normal(0.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(ValuationDistribution::folded_normal(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("pdf is the derivative of cdf on an interior grid") {
    const double h = 1e-6;
    for (const auto& dist :
         {ValuationDistribution::uniform(2.0), ValuationDistribution::log_normal(0.2, 0.8),
          ValuationDistribution::irwin_hall2(), ValuationDistribution::folded_normal(0.5, 0.7)}) {
        double top = dist.bounded() ? dist.support_hi() : dist.quantile(0.999);
        for (int i = 1; i < 40; ++i) {
            double x = top * i / 40.0;
            if (std::fabs(x - 1.0) < 2 * h && dist.kind() == DistKind::irwin_hall2)
                continue;  // pdf kink: one-sided derivatives differ at the knot
            double fd = (dist.cdf(x + h) - dist.cdf(x - h)) / (2 * h);
            CHECK(fd == doctest::Approx(dist.pdf(x)).epsilon(1e-5));
        }
    }
}

TEST_CASE("quantile inverts cdf to 1e-9") {
    for (const auto& dist :
         {ValuationDistribution::uniform(3.0), ValuationDistribution::log_normal(0.5, 1.1)}) {
        for (int i = 1; i < 50; ++i) {
            double p = i / 50.0;
            double x = dist.quantile(p);
            CHECK(dist.cdf(x) == doctest::Approx(p).epsilon(1e-12));
            CHECK(dist.quantile(dist.cdf(x)) == doctest::Approx(x).epsilon(1e-9));
        }
    }
    // folded normal and irwin-hall: round trip through the numeric inverse
    for (const auto& dist :
         {ValuationDistribution::folded_normal(0.5, 0.5), ValuationDistribution::irwin_hall2()}) {
        for (int i = 1; i < 20; ++i) {
            double p = i / 20.0;
            CHECK(dist.cdf(dist.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
        }
    }
}

TEST_CASE("norm_quantile matches norm_cdf to high accuracy") {
    for (double p : {1e-10, 1e-6, 0.01, 0.02425, 0.3, 0.5, 0.7, 0.97575, 0.99, 1 - 1e-6}) {
        double z = norm_quantile(p);
        CHECK(norm_cdf(z) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(norm_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(norm_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(norm_quantile(1.0), std::invalid_argument);
}

TEST_CASE("sampling is deterministic and seed-sensitive") {
    auto ln = ValuationDistribution::log_normal(0.0, 1.0);
    auto a = ln.sample(42, 1000);
    auto b = ln.sample(42, 1000);
    auto c = ln.sample(43, 1000);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("sample moments and support") {
    auto u = ValuationDistribution::uniform(1.0);
    auto us = u.sample(7, 100000);
    double mean = 0.0;
    for (double v : us) mean += v;
    mean /= us.size();
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));  // within 0.01 absolute

    auto fn = ValuationDistribution::folded_normal(0.5, 0.5);
    for (double v : fn.sample(11, 10000)) CHECK(v >= 0.0);

    auto ln = ValuationDistribution::log_normal(0.0, 1.0);
    auto ls = ln.sample(3, 100000);
    std::nth_element(ls.begin(), ls.begin() + ls.size() / 2, ls.end());
    CHECK(ls[ls.size() / 2] == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("empirical cdf converges (KS test)") {
    // KS critical value at alpha = 0.001 for n = 20000 is ~1.95/sqrt(n)
    const std::size_t n = 20000;
    const double crit = 1.95 / std::sqrt(static_cast<double>(n));
    for (const auto& dist :
         {ValuationDistribution::uniform(1.0), ValuationDistribution::log_normal(0.3, 0.9),
          ValuationDistribution::irwin_hall2(), ValuationDistribution::folded_normal(0.5, 0.5)}) {
        CHECK(ks_distance(dist.sample(123, n), dist) < crit);
    }
}

TEST_CASE("order statistic transform") {
    auto u = ValuationDistribution::uniform(1.0);
    auto g3 = order_stat(u, 3);
    CHECK(g3.cdf(0.5) == doctest::Approx(0.25));
    auto g2 = order_stat(u, 2);
    for (double y : {0.1, 0.4, 0.9}) CHECK(g2.cdf(y) == doctest::Approx(u.cdf(y)));
    auto g4 = order_stat(u, 4);
    CHECK(g4.pdf(0.5) == doctest::Approx(0.75));  // d/dy y^3 at 0.5
    CHECK_THROWS_AS(order_stat(u, 1), std::invalid_argument);

    // G nondecreasing in [0,1]
    auto ih = order_stat(ValuationDistribution::irwin_hall2(), 5);
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        double y = 2.0 * i / 40.0;
        double G = ih.cdf(y);
        CHECK(G >= prev);
        CHECK(G <= 1.0);
        prev = G;
    }
}

TEST_CASE("json round trip") {
    for (const auto& dist :
         {ValuationDistribution::uniform(2.5), ValuationDistribution::log_normal(0.4, 1.2),
          ValuationDistribution::irwin_hall2(), ValuationDistribution::folded_normal(0.6, 0.9)}) {
        auto back = ValuationDistribution::from_json(dist.to_json());
        CHECK(back == dist);
    }
}
