#include "entroplin/stats.hpp"

#include "entroplin/errors.hpp"
#include "entroplin/numeric.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

namespace entroplin::stats {

namespace {

double mean_of(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

// Central moments m2..m4 about the sample mean.
struct Moments {
    double mean, m2, m3, m4;
};

Moments central_moments(std::span<const double> xs) {
    const double mean = mean_of(xs);
    KahanSum s2, s3, s4;
    for (double x : xs) {
        const double d = x - mean;
        const double d2 = d * d;
        s2.add(d2);
        s3.add(d2 * d);
        s4.add(d2 * d2);
    }
    const double n = static_cast<double>(xs.size());
    return {mean, s2.value() / n, s3.value() / n, s4.value() / n};
}

void require_spread(double variance, const char* who) {
    if (!(variance > 0.0))
        throw domain_error(std::string(who) + ": sample is degenerate (zero variance)");
}

} // namespace

TTestResult mean_ci_ttest(std::span<const double> samples, double level) {
    const std::size_t n = samples.size();
    if (n < 2) throw domain_error("t test needs at least two samples");
    if (!(level > 0.0) || !(level < 1.0)) throw domain_error("confidence level must be in (0,1)");

    const double mean = mean_of(samples);
    KahanSum ss;
    for (double x : samples) {
        const double d = x - mean;
        ss.add(d * d);
    }
    const double var = ss.value() / static_cast<double>(n - 1);
    require_spread(var, "t test");

    const double se = std::sqrt(var / static_cast<double>(n));
    const double t = mean / se;
    const boost::math::students_t_distribution<double> dist(static_cast<double>(n - 1));
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    const double tq = boost::math::quantile(dist, 0.5 + level / 2.0);
    return {t, p, mean - tq * se, mean + tq * se};
}

std::pair<double, double> jarque_bera(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 8) throw domain_error("Jarque-Bera needs at least eight samples");
    const Moments m = central_moments(samples);
    require_spread(m.m2, "Jarque-Bera");

    const double skew = m.m3 / std::pow(m.m2, 1.5);
    const double kurt = m.m4 / (m.m2 * m.m2);
    const double stat =
        static_cast<double>(n) / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
    // chi^2(2) survival function is exp(-x/2).
    return {stat, std::exp(-0.5 * stat)};
}

NormalityReport normality_report(std::span<const double> samples, double level,
                                 std::size_t bins) {
    const std::size_t n = samples.size();
    if (n < 8) throw domain_error("normality report needs at least eight samples");
    if (bins < 1) throw domain_error("normality report needs at least one histogram bin");

    NormalityReport rep;
    rep.level = level;

    const auto [t, p, lo, hi] = mean_ci_ttest(samples, level);
    rep.t_statistic = t;
    rep.p_value = p;
    rep.ci_low = lo;
    rep.ci_high = hi;

    const Moments m = central_moments(samples);
    rep.sample_mean = m.mean;
    rep.sample_sd = std::sqrt(m.m2 * static_cast<double>(n) / static_cast<double>(n - 1));

    std::tie(rep.jarque_bera_stat, rep.jarque_bera_p) = jarque_bera(samples);

    // Q-Q pairs at plotting positions (i - 0.5)/n.
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const boost::math::normal_distribution<double> unit(0.0, 1.0);
    rep.qq_pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = boost::math::quantile(
            unit, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
        rep.qq_pairs.emplace_back(q, sorted[i]);
    }

    // Histogram over [min, max] with equal-width bins; the top edge closes
    // the last bin.
    const double lo_edge = sorted.front();
    const double hi_edge = sorted.back();
    const double width = (hi_edge - lo_edge) / static_cast<double>(bins);
    rep.histogram.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        rep.histogram.edges[b] = lo_edge + width * static_cast<double>(b);
    rep.histogram.edges.back() = hi_edge;
    rep.histogram.counts.assign(bins, 0);
    for (double x : sorted) {
        std::size_t b = width > 0.0
                            ? static_cast<std::size_t>((x - lo_edge) / width)
                            : 0;
        if (b >= bins) b = bins - 1;
        ++rep.histogram.counts[b];
    }

    // Gaussian KDE overlay on a 256-point grid, reference-rule bandwidth
    // 1.06 sd n^{-1/5}.
    const double bw = 1.06 * rep.sample_sd * std::pow(static_cast<double>(n), -0.2);
    const double grid_lo = lo_edge - 3.0 * bw;
    const double grid_hi = hi_edge + 3.0 * bw;
    const std::size_t grid_pts = 256;
    rep.histogram.density_x.resize(grid_pts);
    rep.histogram.density_y.resize(grid_pts);
    const double inv = 1.0 / (bw * std::sqrt(2.0 * 3.14159265358979323846));
    for (std::size_t g = 0; g < grid_pts; ++g) {
        const double x =
            grid_lo + (grid_hi - grid_lo) * static_cast<double>(g) / double(grid_pts - 1);
        KahanSum acc;
        for (double s : sorted) {
            const double u = (x - s) / bw;
            acc.add(std::exp(-0.5 * u * u));
        }
        rep.histogram.density_x[g] = x;
        rep.histogram.density_y[g] = acc.value() * inv / static_cast<double>(n);
    }
    return rep;
}

std::vector<double> acf(std::span<const double> xs, std::size_t max_lag) {
    const std::size_t n = xs.size();
    if (n == 0 || max_lag >= n) throw domain_error("acf needs max_lag < n");
    const double mean = mean_of(xs);
    KahanSum v;
    for (double x : xs) {
        const double d = x - mean;
        v.add(d * d);
    }
    const double gamma0 = v.value() / static_cast<double>(n);
    require_spread(gamma0, "acf");

    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        KahanSum s;
        for (std::size_t t = 0; t + k < n; ++t) s.add((xs[t] - mean) * (xs[t + k] - mean));
        rho[k] = s.value() / static_cast<double>(n) / gamma0;
    }
    return rho;
}

KpssResult kpss_level(std::span<const double> xs, const KpssLags& lags) {
    const std::size_t n = xs.size();
    if (n < 20) throw domain_error("KPSS needs at least 20 observations");

    std::size_t L;
    if (std::holds_alternative<AutoLags>(lags))
        L = static_cast<std::size_t>(
            std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    else
        L = std::get<FixedLags>(lags).lags;
    if (L >= n) throw domain_error("KPSS lag window must be smaller than n");

    const double mean = mean_of(xs);
    std::vector<double> resid(n);
    for (std::size_t t = 0; t < n; ++t) resid[t] = xs[t] - mean;

    // Numerator: n^{-2} sum_t S_t^2 with S_t the residual partial sums.
    double running = 0.0;
    KahanSum num;
    KahanSum gamma0;
    for (std::size_t t = 0; t < n; ++t) {
        running += resid[t];
        num.add(running * running);
        gamma0.add(resid[t] * resid[t]);
    }
    require_spread(gamma0.value(), "KPSS");

    // Bartlett-window long-run variance.
    double lrv = gamma0.value() / static_cast<double>(n);
    for (std::size_t j = 1; j <= L; ++j) {
        KahanSum cov;
        for (std::size_t t = 0; t + j < n; ++t) cov.add(resid[t] * resid[t + j]);
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(L + 1);
        lrv += 2.0 * w * cov.value() / static_cast<double>(n);
    }
    if (!(lrv > 0.0)) throw domain_error("KPSS long-run variance is not positive");

    const double dn = static_cast<double>(n);
    const double stat = num.value() / (dn * dn) / lrv;
    return {stat, L, stat < kpss_critical_5pct};
}

} // namespace entroplin::stats
