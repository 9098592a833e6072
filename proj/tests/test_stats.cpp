#include "doctest.h"
#include "oracles.hpp"

#include "entroplin/errors.hpp"
#include "entroplin/model.hpp"
#include "entroplin/numeric.hpp"
#include "entroplin/simulate.hpp"
#include "entroplin/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>

using namespace entroplin;
using namespace entroplin::stats;

namespace {

std::vector<double> seeded_normal(std::size_t n, std::uint64_t seed, double mu = 0.0,
                                  double sigma = 1.0) {
    auto xs = simulate::sample_innovations(model::InnovationFamily::gaussian(sigma), n, seed);
    for (double& x : xs) x += mu;
    return xs;
}

std::vector<double> normal_quantile_grid(std::size_t n) {
    const boost::math::normal_distribution<double> unit(0.0, 1.0);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = boost::math::quantile(unit, (double(i) + 0.5) / double(n));
    return xs;
}

} // namespace

TEST_CASE("t test: symmetric two-point sample") {
    const std::vector<double> xs{-1.0, 1.0};
    const auto r = mean_ci_ttest(xs, 0.95);
    CHECK(r.t_statistic == 0.0);
    CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.ci_low == doctest::Approx(-r.ci_high).epsilon(1e-12));
    CHECK(r.ci_low < 0.0);
    CHECK(r.ci_high > 0.0);
}

TEST_CASE("t test: degenerate and invalid inputs") {
    CHECK_THROWS_AS(mean_ci_ttest(std::vector<double>(8, 1.0), 0.95), domain_error);
    CHECK_THROWS_AS(mean_ci_ttest(std::vector<double>{1.0}, 0.95), domain_error);
    CHECK_THROWS_AS(mean_ci_ttest(std::vector<double>{-1.0, 1.0}, 1.5), domain_error);
}

TEST_CASE("t test: power against a shifted mean") {
    const auto xs = seeded_normal(1000, 808, 0.5, 1.0);
    const auto r = mean_ci_ttest(xs, 0.95);
    CHECK(r.p_value < 1e-6);
    CHECK(r.ci_low > 0.0); // CI excludes 0
}

TEST_CASE("t test: CI length shrinks like 1/sqrt(n) and covers the truth") {
    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto xs = seeded_normal(50, 900 + rep, 0.3, 1.0);
        const auto r = mean_ci_ttest(xs, 0.95);
        if (r.ci_low <= 0.3 && 0.3 <= r.ci_high) ++covered;
    }
    CHECK(covered >= 90); // nominal 95
}

TEST_CASE("t test invariance under exact shifts") {
    // Dyadic samples and shift keep the arithmetic exact: the CI translates
    // and the t statistic for the shifted null matches.
    SplitMix64 rng(17);
    std::vector<double> xs(64);
    for (double& x : xs) x = std::floor(rng.uniform_open() * 1024.0) / 256.0;
    const double c = 8.0;
    const auto base = mean_ci_ttest(xs, 0.9);
    std::vector<double> shifted = xs;
    for (double& x : shifted) x += c;
    const auto moved = mean_ci_ttest(shifted, 0.9);
    CHECK(moved.ci_low == doctest::Approx(base.ci_low + c).epsilon(1e-13));
    CHECK(moved.ci_high == doctest::Approx(base.ci_high + c).epsilon(1e-13));
    // p-value for H0: mu = c on shifted data == p-value for H0: mu = 0 on xs
    std::vector<double> recentred = shifted;
    for (double& x : recentred) x -= c;
    CHECK(mean_ci_ttest(recentred, 0.9).p_value == doctest::Approx(base.p_value).epsilon(1e-13));
}

TEST_CASE("jarque-bera: symmetric mesokurtic grid is near zero") {
    const auto xs = normal_quantile_grid(1001);
    const auto [stat, p] = jarque_bera(xs);
    CHECK(stat <= 0.5);
    CHECK(p >= 0.7);
}

TEST_CASE("jarque-bera: heavy skew is rejected; degenerate input errors") {
    SplitMix64 rng(5150);
    std::vector<double> expo(2000);
    for (double& x : expo) x = -std::log(rng.uniform_open());
    const auto [stat, p] = jarque_bera(expo);
    CHECK(stat > 18.5); // chi2(2) tail below 1e-4
    CHECK(p < 1e-4);
    CHECK_THROWS_AS(jarque_bera(std::vector<double>(100, 3.0)), domain_error);
    CHECK_THROWS_AS(jarque_bera(std::vector<double>{1, 2, 3}), domain_error);
}

TEST_CASE("jarque-bera invariance under positive affine maps") {
    const auto xs = seeded_normal(500, 31415);
    const auto [stat, p] = jarque_bera(xs);
    std::vector<double> mapped = xs;
    for (double& x : mapped) x = 2.5 * x - 7.0;
    const auto [stat2, p2] = jarque_bera(mapped);
    CHECK(stat2 == doctest::Approx(stat).epsilon(1e-10));
    CHECK(p2 == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("normality report: qq pairs on an exact normal grid lie on the identity") {
    const auto xs = normal_quantile_grid(257);
    const auto rep = normality_report(xs, 0.95, 16);
    REQUIRE(rep.qq_pairs.size() == xs.size());
    double worst = 0.0;
    for (const auto& [theo, sample] : rep.qq_pairs)
        worst = std::max(worst, std::abs(theo - sample));
    CHECK(worst <= 1e-6);
    // both coordinates nondecreasing
    for (std::size_t i = 1; i < rep.qq_pairs.size(); ++i) {
        CHECK(rep.qq_pairs[i].first >= rep.qq_pairs[i - 1].first);
        CHECK(rep.qq_pairs[i].second >= rep.qq_pairs[i - 1].second);
    }
}

TEST_CASE("normality report: histogram counts sum to n and KDE is a density") {
    const auto xs = seeded_normal(400, 2718);
    const auto rep = normality_report(xs, 0.95, 23);
    CHECK(std::accumulate(rep.histogram.counts.begin(), rep.histogram.counts.end(),
                          std::size_t{0}) == xs.size());
    REQUIRE(rep.histogram.edges.size() == 24);
    CHECK(rep.histogram.density_x.size() == 256);
    // trapezoid mass of the KDE overlay is ~1
    double mass = 0.0;
    for (std::size_t i = 1; i < rep.histogram.density_x.size(); ++i)
        mass += 0.5 * (rep.histogram.density_y[i] + rep.histogram.density_y[i - 1]) *
                (rep.histogram.density_x[i] - rep.histogram.density_x[i - 1]);
    CHECK(mass == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.ci_low <= rep.sample_mean);
    CHECK(rep.sample_mean <= rep.ci_high);
    CHECK(rep.p_value >= 0.0);
    CHECK(rep.p_value <= 1.0);
}

TEST_CASE("acf: lag zero, white-noise bounds, alternating series") {
    const auto wn = seeded_normal(10000, 11);
    const auto rho = acf(wn, 20);
    CHECK(rho[0] == 1.0);
    int violations = 0;
    for (std::size_t k = 1; k <= 20; ++k)
        if (std::abs(rho[k]) > 4.0 / std::sqrt(10000.0)) ++violations;
    CHECK(violations <= 1);

    std::vector<double> alt(512);
    for (std::size_t t = 0; t < alt.size(); ++t) alt[t] = (t % 2 == 0) ? 1.0 : -1.0;
    const auto arho = acf(alt, 2);
    CHECK(std::abs(arho[1] + 1.0) <= 2.0 / 512.0);
    CHECK_THROWS_AS(acf(std::vector<double>(64, 2.0), 3), domain_error);
    CHECK_THROWS_AS(acf(wn, 10000), domain_error);
}

TEST_CASE("acf scale invariance") {
    const auto xs = seeded_normal(300, 77);
    const auto base = acf(xs, 10);
    for (double c : {-3.0, 0.25, 1000.0}) {
        std::vector<double> scaled = xs;
        for (double& x : scaled) x *= c;
        const auto r = acf(scaled, 10);
        for (std::size_t k = 0; k <= 10; ++k) CHECK(std::abs(r[k] - base[k]) <= 1e-12);
    }
}

TEST_CASE("kpss: size under stationarity and power against a random walk") {
    int stationary_ok = 0;
    int walk_rejected = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto wn = seeded_normal(500, 60000 + rep);
        if (kpss_level(wn).stationary_at_5pct) ++stationary_ok;

        auto steps = seeded_normal(500, 70000 + rep);
        std::vector<double> walk(500);
        double acc = 0.0;
        for (std::size_t t = 0; t < 500; ++t) {
            acc += steps[t];
            walk[t] = acc;
        }
        if (!kpss_level(walk).stationary_at_5pct) ++walk_rejected;
    }
    CHECK(stationary_ok >= 95);
    CHECK(walk_rejected >= 95);
}

TEST_CASE("kpss: lag rules and degenerate input") {
    const auto xs = seeded_normal(500, 123);
    const auto auto_rule = kpss_level(xs);
    CHECK(auto_rule.lags_used == std::size_t(std::floor(4.0 * std::pow(5.0, 0.25))));
    const auto fixed = kpss_level(xs, FixedLags{12});
    CHECK(fixed.lags_used == 12);
    CHECK(fixed.stat > 0.0);
    CHECK_THROWS_AS(kpss_level(std::vector<double>(500, 1.0)), domain_error);
    CHECK_THROWS_AS(kpss_level(std::vector<double>{1, 2, 3}), domain_error);
}
