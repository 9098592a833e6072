#include "entroplin/harness.hpp"

#include "entroplin/errors.hpp"
#include "entroplin/numeric.hpp"
#include "entroplin/simulate.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

namespace entroplin::harness {

namespace {

// Distinct golden-step stream offsets keep probe grid points and series pairs
// on non-overlapping replication seeds.
constexpr std::uint64_t kStreamStep = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z += kStreamStep;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t resolve_truncation(const ExperimentSpec& spec) {
    return spec.truncation_m != 0 ? spec.truncation_m
                                  : simulate::default_truncation(spec.model, spec.tail_fraction);
}

template <typename Fn>
void run_replications(std::size_t m, unsigned threads, Fn&& body) {
    parallel_for_index(
        m,
        [&](std::size_t k) {
            try {
                body(k);
            } catch (const std::exception& e) {
                throw convergence_error("replication " + std::to_string(k) +
                                        " failed: " + e.what());
            }
        },
        threads);
}

double estimate_once(std::span<const double> xs, const estimate::EstimatorConfig& config,
                     bool fast) {
    return fast ? estimate::quadratic_estimate_fast(xs, config)
                : estimate::quadratic_estimate(xs, config);
}

double mean_of(const std::vector<double>& xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs, double mean) {
    KahanSum s;
    for (double x : xs) {
        const double d = x - mean;
        s.add(d * d);
    }
    return std::sqrt(s.value() / static_cast<double>(xs.size() - 1));
}

} // namespace

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t r) { return mix64(base) ^ r; }

CltReport run_clt_experiment(const ExperimentSpec& spec) {
    if (spec.m < 2) throw domain_error("CLT experiment needs at least two replications");
    if (spec.n < 2) throw domain_error("CLT experiment needs path length >= 2");

    const auto t0 = std::chrono::steady_clock::now();

    CltReport rep;
    rep.truncation_m = resolve_truncation(spec);
    rep.bandwidth = estimate::bandwidth_for(spec.bandwidth, spec.n);
    rep.q_true = model::true_quadratic_functional(spec.model);

    const estimate::EstimatorConfig config{spec.kernel, rep.bandwidth, 8.0};
    const double sqrt_n = std::sqrt(static_cast<double>(spec.n));
    const double center = spec.center_at_truth ? rep.q_true : 0.0;

    rep.estimates.assign(spec.m, 0.0);
    rep.scaled_errors.assign(spec.m, 0.0);
    run_replications(spec.m, spec.threads, [&](std::size_t k) {
        simulate::PathSpec ps{spec.model, spec.n, rep.truncation_m,
                              replication_seed(spec.base_seed, k), spec.tail_fraction};
        const simulate::SamplePath path = simulate::generate_path(ps);
        const double t = estimate_once(path.values, config, spec.use_fast_estimator);
        rep.estimates[k] = t;
        rep.scaled_errors[k] = sqrt_n * (t - center);
    });

    rep.mean_estimate = mean_of(rep.estimates);
    rep.normality = stats::normality_report(rep.scaled_errors, spec.ci_level, spec.histogram_bins);

    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<HajekRow> hajek_residual_probe(const ExperimentSpec& spec,
                                           std::span<const std::size_t> n_grid) {
    if (spec.m < 2)
        throw domain_error("Hajek residual probe needs m >= 2 (MSE over one replication "
                           "is undefined)");
    if (n_grid.empty()) throw domain_error("Hajek residual probe needs a nonempty n grid");

    const double q = model::true_quadratic_functional(spec.model);
    std::vector<HajekRow> rows;
    rows.reserve(n_grid.size());

    for (std::size_t j = 0; j < n_grid.size(); ++j) {
        const std::size_t n = n_grid[j];
        if (n < 2) throw domain_error("Hajek probe grid entries must be >= 2");
        const double h = estimate::bandwidth_for(spec.bandwidth, n);
        const estimate::EstimatorConfig config{spec.kernel, h, 8.0};
        const std::size_t trunc = resolve_truncation(spec);
        const std::uint64_t stream = spec.base_seed + kStreamStep * static_cast<std::uint64_t>(j);

        std::vector<double> t_values(spec.m), linearization(spec.m);
        run_replications(spec.m, spec.threads, [&](std::size_t k) {
            simulate::PathSpec ps{spec.model, n, trunc, replication_seed(stream, k),
                                  spec.tail_fraction};
            const simulate::SamplePath path = simulate::generate_path(ps);
            t_values[k] = estimate_once(path.values, config, spec.use_fast_estimator);
            KahanSum dens;
            for (double x : path.values) dens.add(model::density_at(spec.model, x, 1e-8));
            linearization[k] =
                2.0 * dens.value() / static_cast<double>(n) - 2.0 * q;
        });

        const double t_mean = mean_of(t_values);
        KahanSum sq;
        for (std::size_t k = 0; k < spec.m; ++k) {
            const double r = t_values[k] - t_mean - linearization[k];
            sq.add(r * r);
        }
        const double mse = sq.value() / static_cast<double>(spec.m);
        const double ratio = rows.empty() ? 0.0 : mse / rows.back().mse;
        rows.push_back({n, h, mse, ratio});
    }
    return rows;
}

BiasScalingResult bias_scaling_probe(const ExperimentSpec& spec, std::span<const double> h_grid) {
    if (spec.m < 2) throw domain_error("bias probe needs at least two replications");
    if (spec.n < 2) throw domain_error("bias probe needs path length >= 2");

    const double q = model::true_quadratic_functional(spec.model);
    const std::size_t trunc = resolve_truncation(spec);

    // One set of paths reused across the bandwidth grid.
    std::vector<std::vector<double>> paths(spec.m);
    run_replications(spec.m, spec.threads, [&](std::size_t k) {
        simulate::PathSpec ps{spec.model, spec.n, trunc, replication_seed(spec.base_seed, k),
                              spec.tail_fraction};
        paths[k] = simulate::generate_path(ps).values;
    });

    BiasScalingResult result;
    result.points.reserve(h_grid.size());
    for (double h : h_grid) {
        if (!(h > 0.0)) throw domain_error("bias probe bandwidths must be positive");
        const estimate::EstimatorConfig config{spec.kernel, h, 8.0};
        std::vector<double> t_values(spec.m);
        run_replications(spec.m, spec.threads, [&](std::size_t k) {
            t_values[k] = estimate_once(paths[k], config, spec.use_fast_estimator);
        });
        const double mean = mean_of(t_values);
        const double se = sd_of(t_values, mean) / std::sqrt(static_cast<double>(spec.m));
        const double bias = mean - q;
        const bool valid = std::abs(bias) >= 5.0 * se;
        result.points.push_back({h, bias, se, valid});
    }

    std::size_t valid_count = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& pt : result.points) {
        if (!pt.valid) continue;
        ++valid_count;
        const double x = std::log(pt.h);
        const double y = std::log(std::abs(pt.bias));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (valid_count < 3) {
        std::ostringstream os;
        os << "bias scaling probe: only " << valid_count
           << " bandwidth(s) have a bias at least five standard errors above the Monte-Carlo "
              "noise; need 3 for a slope fit";
        throw domain_error(os.str());
    }
    const double k = static_cast<double>(valid_count);
    result.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return result;
}

DivergenceStudy run_divergence_study(std::span<const double> xs, std::span<const double> ys,
                                     const estimate::EstimatorConfig& config) {
    DivergenceStudy study;
    study.estimate = estimate::l22_divergence(xs, ys, config);
    study.replicated = false;
    return study;
}

DivergenceStudy run_divergence_study(const model::LinearProcessModel& model_x,
                                     const model::LinearProcessModel& model_y,
                                     const ExperimentSpec& spec) {
    if (spec.m < 2) throw domain_error("replicated divergence study needs m >= 2");
    const double h = estimate::bandwidth_for(spec.bandwidth, spec.n);
    const estimate::EstimatorConfig config{spec.kernel, h, 8.0};

    const std::size_t trunc_x = spec.truncation_m != 0
                                    ? spec.truncation_m
                                    : simulate::default_truncation(model_x, spec.tail_fraction);
    const std::size_t trunc_y = spec.truncation_m != 0
                                    ? spec.truncation_m
                                    : simulate::default_truncation(model_y, spec.tail_fraction);

    DivergenceStudy study;
    study.replicated = true;
    study.replicate_values.assign(spec.m, 0.0);
    run_replications(spec.m, spec.threads, [&](std::size_t k) {
        // Independent processes: the pair (x,y) of replication k draws from
        // the even and odd members of the base's replication stream.
        simulate::PathSpec px{model_x, spec.n, trunc_x, replication_seed(spec.base_seed, 2 * k),
                              spec.tail_fraction};
        simulate::PathSpec py{model_y, spec.n, trunc_y,
                              replication_seed(spec.base_seed, 2 * k + 1), spec.tail_fraction};
        const auto xs = simulate::generate_path(px).values;
        const auto ys = simulate::generate_path(py).values;
        study.replicate_values[k] = estimate::l22_divergence(xs, ys, config);
    });

    study.estimate = mean_of(study.replicate_values);
    study.std_dev = sd_of(study.replicate_values, study.estimate);
    const auto t = stats::mean_ci_ttest(study.replicate_values, spec.ci_level);
    study.ci_low = t.ci_low;
    study.ci_high = t.ci_high;
    return study;
}

} // namespace entroplin::harness
