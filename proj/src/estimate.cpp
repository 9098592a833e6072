#include "entroplin/estimate.hpp"

#include "entroplin/errors.hpp"
#include "entroplin/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace entroplin::estimate {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double gaussian_k(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

double epanechnikov_k(double u) { return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0; }

double epanechnikov_fourier(double l) {
    const double a = std::abs(l);
    if (a < 0.05) {
        const double l2 = l * l;
        return 1.0 - l2 / 10.0 + l2 * l2 / 280.0;
    }
    return 3.0 * (std::sin(a) - a * std::cos(a)) / (a * a * a);
}

} // namespace

Kernel Kernel::gaussian() {
    Kernel k;
    k.shape_ = Shape::gaussian;
    k.name_ = "gaussian";
    k.nonnegative_ = true;
    k.k_hat_integrable_ = true;
    k.k_max_ = kInvSqrt2Pi;
    return k;
}

Kernel Kernel::epanechnikov() {
    Kernel k;
    k.shape_ = Shape::epanechnikov;
    k.name_ = "epanechnikov";
    k.nonnegative_ = true;
    k.k_hat_integrable_ = true;
    k.k_max_ = 0.75;
    return k;
}

Kernel Kernel::custom(std::string name, std::function<double(double)> k,
                      std::function<double(double)> k_hat, bool nonnegative,
                      bool k_hat_integrable, double k_max) {
    Kernel out;
    out.shape_ = Shape::custom;
    out.name_ = std::move(name);
    out.k_ = std::move(k);
    out.k_hat_ = std::move(k_hat);
    out.nonnegative_ = nonnegative;
    out.k_hat_integrable_ = k_hat_integrable;
    out.k_max_ = k_max;
    return out;
}

double Kernel::operator()(double u) const {
    switch (shape_) {
    case Shape::gaussian: return gaussian_k(u);
    case Shape::epanechnikov: return epanechnikov_k(u);
    default: return k_(u);
    }
}

double Kernel::fourier(double lambda) const {
    switch (shape_) {
    case Shape::gaussian: return std::exp(-0.5 * lambda * lambda);
    case Shape::epanechnikov: return epanechnikov_fourier(lambda);
    default:
        if (!k_hat_) throw domain_error("custom kernel has no Fourier transform");
        return k_hat_(lambda);
    }
}

double Kernel::tail_bound(double cutoff) const {
    switch (shape_) {
    case Shape::gaussian: return gaussian_k(cutoff);
    case Shape::epanechnikov: return cutoff >= 1.0 ? 0.0 : 0.75;
    default: return k_max_; // no decay assumption for custom kernels
    }
}

double Kernel::fourier_window(double tol) const {
    tol = std::max(tol, 1e-300);
    switch (shape_) {
    case Shape::gaussian: {
        // Int_{|l|>W} e^{-l^2/2} dl <= (2/W) e^{-W^2/2}
        double w = 3.0;
        for (int i = 0; i < 4; ++i) w = std::sqrt(2.0 * std::log(2.0 / (tol * w)) + 1e-12);
        return std::max(w, 3.0);
    }
    case Shape::epanechnikov:
        // |khat(l)| <= 6/l^2 for |l| >= 1, so the two-sided tail is <= 12/W.
        return std::max(12.0 / tol, 3.0);
    default:
        throw domain_error("custom kernel has no Fourier tail model; spectral path unavailable");
    }
}

// ---------------------------------------------------------------------------
// Bandwidth rules
// ---------------------------------------------------------------------------

double bandwidth_for(const BandwidthRule& rule, std::size_t n) {
    if (n == 0) throw domain_error("bandwidth rule needs n >= 1");
    const double dn = static_cast<double>(n);
    if (const auto* r = std::get_if<Thm1Rate>(&rule)) {
        if (!(r->gamma > 0.0) || !(r->gamma <= 1.0))
            throw domain_error("rate rule requires gamma in (0,1]");
        return std::pow(dn, -2.0 / (4.0 * r->gamma + 1.0));
    }
    if (const auto* r = std::get_if<Thm2Rate>(&rule)) {
        if (!(r->gamma > 0.0) || !(r->gamma <= 1.0))
            throw domain_error("rate rule requires gamma in (0,1]");
        return std::pow(dn, -1.0 / (2.0 * r->gamma + 1.0));
    }
    if (std::holds_alternative<PaperDefault>(rule)) return std::pow(dn, -0.4);
    const double h = std::get<Fixed>(rule).h;
    if (!(h > 0.0)) throw domain_error("fixed bandwidth must be positive");
    return h;
}

BandwidthRule parse_bandwidth_rule(const std::string& text, double gamma_flag) {
    if (text == "auto-thm1") return Thm1Rate{gamma_flag};
    if (text == "auto-thm2") return Thm2Rate{gamma_flag};
    if (text == "paper") return PaperDefault{};
    try {
        std::size_t pos = 0;
        const double h = std::stod(text, &pos);
        if (pos == text.size()) return Fixed{h};
    } catch (const std::exception&) {
    }
    throw domain_error("unrecognized bandwidth rule '" + text +
                       "' (expected auto-thm1, auto-thm2, paper, or a number)");
}

std::string describe(const BandwidthRule& rule) {
    if (const auto* r = std::get_if<Thm1Rate>(&rule))
        return "n^(-2/(4*" + std::to_string(r->gamma) + "+1))";
    if (const auto* r = std::get_if<Thm2Rate>(&rule))
        return "n^(-1/(2*" + std::to_string(r->gamma) + "+1))";
    if (std::holds_alternative<PaperDefault>(rule)) return "n^(-2/5)";
    return "fixed(" + std::to_string(std::get<Fixed>(rule).h) + ")";
}

// ---------------------------------------------------------------------------
// Pairwise sums
// ---------------------------------------------------------------------------

namespace {

void require_pair_input(std::size_t n, double h) {
    if (n < 2) throw domain_error("quadratic estimate needs at least two observations");
    if (!(h > 0.0)) throw domain_error("bandwidth must be positive");
}

// Rows are processed in fixed blocks; each block owns a compensated partial
// sum and blocks are reduced in index order, so the result is independent of
// any parallel scheduling of blocks.
constexpr std::size_t kRowBlock = 256;

template <typename RowSum>
double blocked_row_reduce(std::size_t n, RowSum&& row_sum) {
    KahanSum total;
    for (std::size_t start = 0; start < n; start += kRowBlock) {
        const std::size_t stop = std::min(n, start + kRowBlock);
        KahanSum block;
        for (std::size_t i = start; i < stop; ++i) row_sum(i, block);
        total.add(block.value());
    }
    return total.value();
}

template <typename KernelFn>
double pair_sum_all(std::span<const double> xs, double inv_h, KernelFn k) {
    const std::size_t n = xs.size();
    return blocked_row_reduce(n, [&](std::size_t i, KahanSum& acc) {
        const double xi = xs[i];
        for (std::size_t j = i + 1; j < n; ++j) acc.add(k((xi - xs[j]) * inv_h));
    });
}

template <typename KernelFn>
double pair_sum_window(const std::vector<double>& sorted, double inv_h, double radius,
                       KernelFn k) {
    const std::size_t n = sorted.size();
    std::size_t window_start = 0;
    KahanSum total;
    KahanSum block;
    std::size_t rows_in_block = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (sorted[i] - sorted[window_start] > radius) ++window_start;
        const double xi = sorted[i];
        for (std::size_t j = window_start; j < i; ++j) block.add(k((xi - sorted[j]) * inv_h));
        if (++rows_in_block == kRowBlock || i + 1 == n) {
            total.add(block.value());
            block = KahanSum{};
            rows_in_block = 0;
        }
    }
    return total.value();
}

template <typename F> double dispatch_kernel(const Kernel& kernel, F&& f) {
    switch (kernel.shape()) {
    case Kernel::Shape::gaussian: return f(gaussian_k);
    case Kernel::Shape::epanechnikov: return f(epanechnikov_k);
    default: return f([&kernel](double u) { return kernel(u); });
    }
}

} // namespace

double quadratic_estimate(std::span<const double> xs, const EstimatorConfig& config) {
    const std::size_t n = xs.size();
    require_pair_input(n, config.bandwidth);
    const double inv_h = 1.0 / config.bandwidth;
    const double sum = dispatch_kernel(config.kernel,
                                       [&](auto k) { return pair_sum_all(xs, inv_h, k); });
    const double dn = static_cast<double>(n);
    return 2.0 * sum / (dn * (dn - 1.0) * config.bandwidth);
}

double quadratic_estimate_fast(std::span<const double> xs, const EstimatorConfig& config) {
    const std::size_t n = xs.size();
    require_pair_input(n, config.bandwidth);
    if (!(config.fast_cutoff_sigmas > 0.0))
        throw domain_error("fast path cutoff must be positive");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double radius = config.fast_cutoff_sigmas * config.bandwidth;
    const double inv_h = 1.0 / config.bandwidth;
    const double sum = dispatch_kernel(
        config.kernel, [&](auto k) { return pair_sum_window(sorted, inv_h, radius, k); });
    const double dn = static_cast<double>(n);
    return 2.0 * sum / (dn * (dn - 1.0) * config.bandwidth);
}

double fast_gap_bound(std::size_t n, const EstimatorConfig& config) {
    return static_cast<double>(n) * config.kernel.tail_bound(config.fast_cutoff_sigmas) /
           config.bandwidth;
}

double spectral_estimate(std::span<const double> xs, const EstimatorConfig& config,
                         double quad_tol) {
    const std::size_t n = xs.size();
    require_pair_input(n, config.bandwidth);
    if (!(quad_tol > 0.0)) throw domain_error("spectral tolerance must be positive");
    if (!config.kernel.fourier_integrable())
        throw domain_error("spectral path requires an absolutely integrable kernel transform");

    // The estimate is shift invariant; center at the median to halve the
    // oscillation frequency of the empirical charfn.
    std::vector<double> centered(xs.begin(), xs.end());
    std::nth_element(centered.begin(), centered.begin() + n / 2, centered.end());
    const double med = centered[n / 2];
    centered.assign(xs.begin(), xs.end());
    for (double& v : centered) v -= med;

    const double h = config.bandwidth;
    const double dn = static_cast<double>(n);
    // Neglected Fourier tail below quad_tol/2, quadrature budget quad_tol/2.
    const double window = config.kernel.fourier_window(quad_tol * kPi * h) / h;

    auto integrand = [&](double l) {
        double re = 0.0, im = 0.0;
        for (double x : centered) {
            re += std::cos(l * x);
            im += std::sin(l * x);
        }
        const double mod2 = re * re + im * im; // n^2 |phi_n(l)|^2
        return config.kernel.fourier(l * h) * (mod2 - dn) / (dn * (dn - 1.0));
    };
    const double integral = integrate(integrand, 0.0, window, quad_tol * kPi / 2.0);
    return integral / kPi;
}

double renyi_estimate(std::span<const double> xs, const EstimatorConfig& config) {
    if (!config.kernel.nonnegative())
        throw domain_error("the entropy estimator -ln(1/n + T_n) requires a nonnegative kernel "
                           "(kernel '" + config.kernel.name() + "' is not flagged nonnegative)");
    const double t = quadratic_estimate(xs, config);
    return -std::log(1.0 / static_cast<double>(xs.size()) + t);
}

double cross_estimate(std::span<const double> xs, std::span<const double> ys,
                      const EstimatorConfig& config) {
    if (xs.size() != ys.size())
        throw domain_error("cross estimate requires equal sample lengths (" +
                           std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + ")");
    if (xs.empty()) throw domain_error("cross estimate needs nonempty samples");
    if (!(config.bandwidth > 0.0)) throw domain_error("bandwidth must be positive");

    const std::size_t n = xs.size();
    const double inv_h = 1.0 / config.bandwidth;
    const double sum = dispatch_kernel(config.kernel, [&](auto k) {
        return blocked_row_reduce(n, [&](std::size_t i, KahanSum& acc) {
            const double xi = xs[i];
            for (std::size_t j = 0; j < n; ++j) acc.add(k((xi - ys[j]) * inv_h));
        });
    });
    const double dn = static_cast<double>(n);
    return sum / (dn * dn * config.bandwidth);
}

double l22_divergence(std::span<const double> xs, std::span<const double> ys,
                      const EstimatorConfig& config, bool clamp_at_zero) {
    const double d = quadratic_estimate(xs, config) + quadratic_estimate(ys, config) -
                     2.0 * cross_estimate(xs, ys, config);
    return clamp_at_zero ? std::max(d, 0.0) : d;
}

} // namespace entroplin::estimate
