#ifndef ENTROPLIN_HARNESS_HPP
#define ENTROPLIN_HARNESS_HPP

#include "entroplin/estimate.hpp"
#include "entroplin/model.hpp"
#include "entroplin/stats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace entroplin::harness {

// Stream seed of replication r for a base seed: finalizer-mixed base XOR r.
// Mixing first keeps nearby bases (0,1,2,...) from producing overlapping
// replication streams; the XOR split itself stays trivially enumerable.
std::uint64_t replication_seed(std::uint64_t base, std::uint64_t r);

struct ExperimentSpec {
    model::LinearProcessModel model;
    std::size_t n = 1024; // path length
    std::size_t m = 200;  // replications
    estimate::BandwidthRule bandwidth = estimate::PaperDefault{};
    estimate::Kernel kernel = estimate::Kernel::gaussian();
    std::uint64_t base_seed = 0; // replication r draws from stream base ^ r
    std::size_t truncation_m = 0; // 0: use the default tail rule
    double tail_fraction = 1e-4;
    bool use_fast_estimator = true;
    // When false the scaled statistic is sqrt(n) T_n instead of
    // sqrt(n)(T_n - Q); used for regimes where no centering is established.
    bool center_at_truth = true;
    double ci_level = 0.95;
    std::size_t histogram_bins = 30;
    unsigned threads = 0; // 0: ENTROPLIN_THREADS or hardware
};

struct CltReport {
    std::vector<double> estimates;     // T_n per replication, by index
    std::vector<double> scaled_errors; // sqrt(n) (T_n - q_true) per replication
    double q_true = 0.0;
    double bandwidth = 0.0;
    std::size_t truncation_m = 0;
    double mean_estimate = 0.0;
    stats::NormalityReport normality; // diagnostics of the scaled errors
    double elapsed_seconds = 0.0;
};

// Replicated CLT experiment: deterministic in the spec, independent of the
// worker count.  A failing replication aborts with its index in the message.
CltReport run_clt_experiment(const ExperimentSpec& spec);

// Mean squared residual of the linearization
//   T_n - mean(T_n) - (1/n) sum_i 2 (f(X_i) - Q)
// across replications, per grid path length.  The expectation of T_n is
// approximated by the replication mean, so tolerances on the decay should
// budget for that estimate's standard error.
struct HajekRow {
    std::size_t n;
    double bandwidth;
    double mse;
    double ratio_to_previous; // 0 for the first row
};
std::vector<HajekRow> hajek_residual_probe(const ExperimentSpec& spec,
                                           std::span<const std::size_t> n_grid);

// Fits the slope of log|bias| against log h over bandwidths where the
// Monte-Carlo bias estimate is resolvable (|bias| at least five standard
// errors).  Fewer than three resolvable points raises domain_error.
struct BiasPoint {
    double h;
    double bias;  // mean_k T_n(h) - Q
    double se;    // standard error of the bias estimate
    bool valid;
};
struct BiasScalingResult {
    double slope;
    std::vector<BiasPoint> points;
};
BiasScalingResult bias_scaling_probe(const ExperimentSpec& spec, std::span<const double> h_grid);

// Divergence study: a single-shot estimate for supplied series, or a
// replicated estimate with a confidence interval for a model pair.
struct DivergenceStudy {
    double estimate = 0.0; // single-shot value or replication mean
    bool replicated = false;
    std::vector<double> replicate_values;
    double ci_low = 0.0, ci_high = 0.0;
    double std_dev = 0.0;
};
DivergenceStudy run_divergence_study(std::span<const double> xs, std::span<const double> ys,
                                     const estimate::EstimatorConfig& config);
DivergenceStudy run_divergence_study(const model::LinearProcessModel& model_x,
                                     const model::LinearProcessModel& model_y,
                                     const ExperimentSpec& spec);

} // namespace entroplin::harness

#endif
