#ifndef ENTROPLIN_STATS_HPP
#define ENTROPLIN_STATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace entroplin::stats {

struct Histogram {
    std::vector<double> edges;       // bins+1 edges
    std::vector<std::size_t> counts; // one per bin
    std::vector<double> density_x;   // kernel-density overlay, 256 samples
    std::vector<double> density_y;
};

struct TTestResult {
    double t_statistic;
    double p_value; // two-sided, H0: mu = 0
    double ci_low, ci_high;
};

struct NormalityReport {
    double sample_mean = 0.0;
    double sample_sd = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;
    double ci_low = 0.0, ci_high = 0.0;
    double level = 0.95;
    double jarque_bera_stat = 0.0;
    double jarque_bera_p = 1.0;
    // (normal quantile at (i-0.5)/n, i-th order statistic); nondecreasing in
    // both coordinates.
    std::vector<std::pair<double, double>> qq_pairs;
    Histogram histogram;
};

// One-sample t test of H0: mu = 0 with a symmetric (1-level) CI.
// Throws domain_error on n < 2 or zero sample variance.
TTestResult mean_ci_ttest(std::span<const double> samples, double level);

// Jarque-Bera statistic n/6 (skew^2 + (kurt-3)^2/4) with chi^2(2) tail
// p-value.  Requires n >= 8 and nonzero variance.
std::pair<double, double> jarque_bera(std::span<const double> samples);

NormalityReport normality_report(std::span<const double> samples, double level,
                                 std::size_t bins);

// Sample autocorrelation with biased (1/n) normalization; acf[0] = 1.
std::vector<double> acf(std::span<const double> xs, std::size_t max_lag);

// KPSS level-stationarity test.
struct AutoLags {};
struct FixedLags {
    std::size_t lags;
};
using KpssLags = std::variant<AutoLags, FixedLags>;

// 5% critical value for the level-stationary KPSS statistic (KPSS 1992,
// Table 1, eta_mu).
inline constexpr double kpss_critical_5pct = 0.463;

struct KpssResult {
    double stat;
    std::size_t lags_used;
    bool stationary_at_5pct; // stat < 0.463
};

KpssResult kpss_level(std::span<const double> xs, const KpssLags& lags = AutoLags{});

} // namespace entroplin::stats

#endif
