#ifndef ENTROPLIN_ESTIMATE_HPP
#define ENTROPLIN_ESTIMATE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>

namespace entroplin::estimate {

// ---------------------------------------------------------------------------
// Kernels.  Fourier convention: khat(l) = Int e^{i u l} K(u) du.
// ---------------------------------------------------------------------------

class Kernel {
public:
    enum class Shape { gaussian, epanechnikov, custom };

    // Standard normal density; khat(l) = exp(-l^2/2).
    static Kernel gaussian();
    // 0.75 (1-u^2) on [-1,1]; khat(l) = 3 (sin l - l cos l) / l^3.
    static Kernel epanechnikov();
    // Arbitrary kernel for experiments; caller declares the flags.
    static Kernel custom(std::string name, std::function<double(double)> k,
                         std::function<double(double)> k_hat, bool nonnegative,
                         bool k_hat_integrable, double k_max);

    double operator()(double u) const;
    double fourier(double lambda) const;

    bool nonnegative() const { return nonnegative_; }
    bool fourier_integrable() const { return k_hat_integrable_; }
    double max_value() const { return k_max_; }
    Shape shape() const { return shape_; }
    const std::string& name() const { return name_; }

    // Upper bound on |K(u)| for |u| >= cutoff; used by the windowed fast path.
    double tail_bound(double cutoff) const;
    // Half-width W (in units of l) outside which |khat(l)| integrates to less
    // than tol; used by the spectral path.
    double fourier_window(double tol) const;

private:
    Shape shape_ = Shape::gaussian;
    std::string name_ = "gaussian";
    std::function<double(double)> k_, k_hat_;
    bool nonnegative_ = true;
    bool k_hat_integrable_ = true;
    double k_max_ = 0.0;
};

struct EstimatorConfig {
    Kernel kernel = Kernel::gaussian();
    double bandwidth = 1.0;
    // Window half-width, in bandwidths, for the sorted fast path.
    double fast_cutoff_sigmas = 8.0;
};

// ---------------------------------------------------------------------------
// Bandwidth rules.
// ---------------------------------------------------------------------------

struct Thm1Rate {
    double gamma;
}; // n^{-2/(4 gamma + 1)}
struct Thm2Rate {
    double gamma;
}; // n^{-1/(2 gamma + 1)}
struct PaperDefault {}; // n^{-2/5}
struct Fixed {
    double h;
};
using BandwidthRule = std::variant<Thm1Rate, Thm2Rate, PaperDefault, Fixed>;

double bandwidth_for(const BandwidthRule& rule, std::size_t n);
BandwidthRule parse_bandwidth_rule(const std::string& text, double gamma_flag);
std::string describe(const BandwidthRule& rule);

// ---------------------------------------------------------------------------
// Estimators.
// ---------------------------------------------------------------------------

// Quadratic-functional estimate  (2 / (n (n-1) h)) sum_{i<j} K((x_i-x_j)/h).
// Exact pairwise sum, compensated accumulation, block-partitioned so the
// reduction order is fixed.
double quadratic_estimate(std::span<const double> xs, const EstimatorConfig& config);

// Same estimate restricted to pairs within cutoff*h after sorting a copy.
// The neglected mass is bounded by fast_gap_bound().
double quadratic_estimate_fast(std::span<const double> xs, const EstimatorConfig& config);

// Guaranteed bound on |quadratic_estimate - quadratic_estimate_fast|.
double fast_gap_bound(std::size_t n, const EstimatorConfig& config);

// Independent evaluation through the empirical characteristic function:
//   (1/2pi) Int khat(l h) (n^2 |phi_n(l)|^2 - n) / (n (n-1)) dl.
// Serves as a cross-check oracle for the pairwise paths.
double spectral_estimate(std::span<const double> xs, const EstimatorConfig& config,
                         double quad_tol);

// Quadratic Renyi entropy estimate -ln(1/n + T_n); requires a kernel flagged
// nonnegative so that T_n >= 0.
double renyi_estimate(std::span<const double> xs, const EstimatorConfig& config);

// Cross term  (1 / (n^2 h)) sum_{i,j} K((x_i - y_j)/h)  over equal-length
// samples (windowed fast path included).
double cross_estimate(std::span<const double> xs, std::span<const double> ys,
                      const EstimatorConfig& config);

// L2-squared divergence estimate T(x) + T(y) - 2 T(x,y).  Signed by
// construction; clamp_at_zero truncates negative values when requested.
double l22_divergence(std::span<const double> xs, std::span<const double> ys,
                      const EstimatorConfig& config, bool clamp_at_zero = false);

} // namespace entroplin::estimate

#endif
