#include "doctest.h"
#include "oracles.hpp"

#include "entroplin/errors.hpp"
#include "entroplin/harness.hpp"
#include "entroplin/simulate.hpp"

#include <cmath>
#include <cstdlib>

using namespace entroplin;
using namespace entroplin::harness;

namespace {

ExperimentSpec small_gaussian_spec() {
    ExperimentSpec spec;
    spec.model = {model::CoefficientSequence::farima(-0.5),
                  model::InnovationFamily::gaussian(1.0)};
    spec.n = 256;
    spec.m = 24;
    spec.base_seed = 1001;
    spec.truncation_m = 2048;
    return spec;
}

} // namespace

TEST_CASE("CLT report is a pure function of the spec, across worker counts") {
    const ExperimentSpec spec = small_gaussian_spec();

    setenv("ENTROPLIN_THREADS", "1", 1);
    const CltReport serial = run_clt_experiment(spec);
    setenv("ENTROPLIN_THREADS", "2", 1);
    const CltReport threaded = run_clt_experiment(spec);
    unsetenv("ENTROPLIN_THREADS");
    const CltReport again = run_clt_experiment(spec);

    REQUIRE(serial.scaled_errors.size() == spec.m);
    for (std::size_t k = 0; k < spec.m; ++k) {
        CHECK(serial.scaled_errors[k] == threaded.scaled_errors[k]);
        CHECK(serial.scaled_errors[k] == again.scaled_errors[k]);
    }
}

TEST_CASE("scaled errors recompute from the seeded paths") {
    const ExperimentSpec spec = small_gaussian_spec();
    const CltReport rep = run_clt_experiment(spec);
    const double q = model::true_quadratic_functional(spec.model);
    CHECK(rep.q_true == doctest::Approx(q).epsilon(1e-14));

    const estimate::EstimatorConfig config{spec.kernel, rep.bandwidth, 8.0};
    for (std::size_t k : {std::size_t{0}, std::size_t{7}, std::size_t{23}}) {
        simulate::PathSpec ps{spec.model, spec.n, spec.truncation_m,
                              replication_seed(spec.base_seed, k), 1e-4};
        const auto path = simulate::generate_path(ps);
        const double t = estimate::quadratic_estimate_fast(path.values, config);
        CHECK(rep.scaled_errors[k] ==
              doctest::Approx(std::sqrt(double(spec.n)) * (t - q)).epsilon(1e-13));
        CHECK(rep.estimates[k] == doctest::Approx(t).epsilon(1e-14));
    }
}

TEST_CASE("swapping the naive and fast estimators moves scaled errors by under 1e-6") {
    ExperimentSpec spec = small_gaussian_spec();
    spec.m = 8;
    const CltReport fast = run_clt_experiment(spec);
    spec.use_fast_estimator = false;
    const CltReport naive = run_clt_experiment(spec);
    for (std::size_t k = 0; k < spec.m; ++k)
        CHECK(std::abs(fast.scaled_errors[k] - naive.scaled_errors[k]) <= 1e-6);
}

TEST_CASE("iid special case passes the CLT diagnostics") {
    ExperimentSpec spec;
    spec.model = {model::CoefficientSequence::from_values({1.0}),
                  model::InnovationFamily::gaussian(1.0)};
    spec.n = 512;
    spec.m = 100;
    spec.base_seed = 424242;
    spec.truncation_m = 1;
    const CltReport rep = run_clt_experiment(spec);
    CHECK(rep.normality.jarque_bera_p > 0.01);
    CHECK(rep.normality.ci_low <= 0.0);
    CHECK(rep.normality.ci_high >= 0.0);
    CHECK(rep.mean_estimate ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(3.14159265358979323846))).epsilon(0.05));
}

TEST_CASE("experiment input validation") {
    ExperimentSpec spec = small_gaussian_spec();
    spec.m = 1;
    CHECK_THROWS_AS(run_clt_experiment(spec), domain_error);
    spec = small_gaussian_spec();
    spec.n = 1;
    CHECK_THROWS_AS(run_clt_experiment(spec), domain_error);
}

TEST_CASE("failing replications abort with the replication index") {
    ExperimentSpec spec = small_gaussian_spec();
    spec.truncation_m = 4; // violates the tail rule for every replication
    CHECK_THROWS_WITH_AS(run_clt_experiment(spec), doctest::Contains("replication"),
                         convergence_error);
}

TEST_CASE("hajek probe: residual MSE shrinks with n") {
    ExperimentSpec spec = small_gaussian_spec();
    spec.m = 60;
    spec.base_seed = 7;
    const std::size_t grid[] = {128, 512};
    const auto rows = hajek_residual_probe(spec, grid);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].n == 128);
    CHECK(rows[1].n == 512);
    CHECK(rows[1].mse < 0.9 * rows[0].mse);
    CHECK(rows[1].ratio_to_previous == doctest::Approx(rows[1].mse / rows[0].mse));
}

TEST_CASE("hajek probe rejects undefined MSE") {
    ExperimentSpec spec = small_gaussian_spec();
    spec.m = 1;
    const std::size_t grid[] = {128};
    CHECK_THROWS_AS(hajek_residual_probe(spec, grid), domain_error);
}

TEST_CASE("bias probe: insufficient grids error, monotone bias in the resolvable regime") {
    ExperimentSpec spec = small_gaussian_spec();
    spec.n = 1024;
    spec.m = 100;
    spec.base_seed = 11;
    spec.truncation_m = 4096;

    const double lone[] = {0.3};
    CHECK_THROWS_WITH_AS(bias_scaling_probe(spec, lone), doctest::Contains("bandwidth"),
                         domain_error);

    const double grid[] = {0.25, 0.4, 0.6, 0.9};
    const auto result = bias_scaling_probe(spec, grid);
    REQUIRE(result.points.size() == 4);
    // bias grows with h once resolvable
    CHECK(std::abs(result.points.back().bias) > std::abs(result.points.front().bias));
    CHECK(result.slope > 0.5);
    CHECK(result.slope < 3.5);
}

TEST_CASE("divergence study: series mode is a single-shot estimate") {
    const std::vector<double> xs{0.0, 1.0};
    const estimate::EstimatorConfig config{estimate::Kernel::gaussian(), 1.0, 8.0};
    const auto study = run_divergence_study(xs, xs, config);
    CHECK(!study.replicated);
    CHECK(study.estimate == doctest::Approx(-0.15697).epsilon(1e-4));
}

TEST_CASE("divergence study: identical models bracket zero") {
    ExperimentSpec spec;
    spec.model = {model::CoefficientSequence::farima(-0.5),
                  model::InnovationFamily::gaussian(1.0)};
    spec.n = 256;
    spec.m = 48;
    spec.base_seed = 900;
    spec.truncation_m = 2048;
    const auto study = run_divergence_study(spec.model, spec.model, spec);
    CHECK(study.replicated);
    REQUIRE(study.replicate_values.size() == spec.m);
    CHECK(study.ci_low <= 0.0);
    CHECK(study.ci_high >= 0.0);
    // distinguishable models push the CI away from zero
    ExperimentSpec far = spec;
    const model::LinearProcessModel shifted{model::CoefficientSequence::from_values({4.0}),
                                            model::InnovationFamily::gaussian(1.0)};
    const auto separated = run_divergence_study(spec.model, shifted, far);
    CHECK(separated.ci_low > 0.0);
}

TEST_CASE("divergence replications are deterministic") {
    ExperimentSpec spec;
    spec.model = {model::CoefficientSequence::from_values({1.0}),
                  model::InnovationFamily::gaussian(1.0)};
    spec.n = 128;
    spec.m = 16;
    spec.base_seed = 5;
    spec.truncation_m = 1;
    const auto a = run_divergence_study(spec.model, spec.model, spec);
    const auto b = run_divergence_study(spec.model, spec.model, spec);
    for (std::size_t k = 0; k < spec.m; ++k)
        CHECK(a.replicate_values[k] == b.replicate_values[k]);
    // x and y streams differ: the divergence is not computed on equal paths
    CHECK(a.std_dev > 0.0);
}
