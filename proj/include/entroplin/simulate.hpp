#ifndef ENTROPLIN_SIMULATE_HPP
#define ENTROPLIN_SIMULATE_HPP

#include "entroplin/model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace entroplin::simulate {

struct PathSpec {
    model::LinearProcessModel model;
    std::size_t n;            // path length
    std::size_t truncation_m; // MA cutoff: X_t = sum_{i<=M} a_i e_{t-i}
    std::uint64_t seed;
    // Maximum allowed ratio of the neglected tail scale to the marginal scale
    // (sigma sqrt(sum_{i>M} a_i^2), resp. (c sum_{i>M}|a_i|^alpha)^{1/alpha}).
    double tail_fraction = 1e-4;
};

struct SamplePath {
    std::vector<double> values;
    PathSpec provenance;
};

// i.i.d. draws from the innovation law, a pure function of (family, count,
// seed).  Gaussian draws are the normal quantile transform of SplitMix64
// uniforms; stable draws use the Chambers-Mallows-Stuck construction for the
// exp(-c|l|^alpha) convention, with the alpha = 1 (Cauchy) branch separate.
std::vector<double> sample_innovations(const model::InnovationFamily& family, std::size_t count,
                                       std::uint64_t seed);

// Truncated moving-average path.  Deterministic in the spec; throws
// config_error naming the required cutoff when truncation_m violates the
// tail_fraction rule.
SamplePath generate_path(const PathSpec& spec);

// Smallest cutoff satisfying the tail rule (as a real number; may be
// astronomically large for slowly decaying coefficients).
double required_truncation(const model::LinearProcessModel& m, double tail_fraction);

// max(4096, required_truncation).  Throws config_error when the requirement
// exceeds the coefficient budget.
std::size_t default_truncation(const model::LinearProcessModel& m, double tail_fraction = 1e-4);

// Convolution kernels behind generate_path, exposed so tests can drive them
// with fixed innovation streams and cross-check the two implementations.
// out[k] = sum_i coeffs[i] * innov[k + (coeffs.size()-1) - i],  k < n.
std::vector<double> convolve_direct(const std::vector<double>& coeffs,
                                    const std::vector<double>& innovations, std::size_t n);
std::vector<double> convolve_fft(const std::vector<double>& coeffs,
                                 const std::vector<double>& innovations, std::size_t n);

} // namespace entroplin::simulate

#endif
