#include "entroplin/simulate.hpp"

#include "entroplin/errors.hpp"
#include "entroplin/numeric.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <fftw3.h>
#include <limits>
#include <mutex>
#include <sstream>

namespace entroplin::simulate {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_quantile(double u) {
    static const boost::math::normal_distribution<double> unit(0.0, 1.0);
    return boost::math::quantile(unit, u);
}

// Symmetric Chambers-Mallows-Stuck transform for charfn exp(-|t|^alpha).
double stable_standard(double alpha, double v, double w) {
    // v in (-pi/2, pi/2), w ~ Exp(1)
    const double sin_av = std::sin(alpha * v);
    const double cos_v = std::cos(v);
    const double cos_rest = std::cos((1.0 - alpha) * v);
    return sin_av / std::pow(cos_v, 1.0 / alpha) *
           std::pow(cos_rest / w, (1.0 - alpha) / alpha);
}

} // namespace

std::vector<double> sample_innovations(const model::InnovationFamily& family, std::size_t count,
                                       std::uint64_t seed) {
    if (count == 0) throw domain_error("innovation sampler needs count >= 1");
    SplitMix64 rng(seed);
    std::vector<double> out(count);

    using Law = model::InnovationFamily::Law;
    if (family.law() == Law::gaussian) {
        const double sigma = family.sigma();
        for (double& x : out) x = sigma * normal_quantile(rng.uniform_open());
        return out;
    }

    const double alpha = family.alpha();
    const double c = family.scale_c();
    if (alpha == 1.0) {
        // Cauchy with scale c: charfn exp(-c|t|).
        for (double& x : out) x = c * std::tan(kPi * (rng.uniform_open() - 0.5));
        return out;
    }
    const double scale = std::pow(c, 1.0 / alpha);
    for (double& x : out) {
        const double v = kPi * (rng.uniform_open() - 0.5);
        const double w = -std::log(rng.uniform_open());
        x = scale * stable_standard(alpha, v, w);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Truncation rule
// ---------------------------------------------------------------------------

namespace {

double family_power(const model::LinearProcessModel& m) {
    return m.innovations.law() == model::InnovationFamily::Law::gaussian ? 2.0
                                                                         : m.innovations.alpha();
}

// sum_{i>M} |a_i|^g, bounded from the structure of the sequence.
double tail_power_sum(const model::LinearProcessModel& m, double g, double M) {
    const auto& coeffs = m.coeffs;
    if (coeffs.finite()) {
        const auto& vals =
            std::get<model::CoefficientSequence::Explicit>(coeffs.kind()).values;
        double s = 0.0;
        for (std::size_t i = static_cast<std::size_t>(M) + 1; i < vals.size(); ++i)
            s += std::pow(std::abs(vals[i]), g);
        return s;
    }
    if (auto p = coeffs.tail_exponent()) {
        const double gp = g * (*p);
        if (gp >= -1.0) return std::numeric_limits<double>::infinity();
        const double c = coeffs.tail_constant().value_or(1.0);
        return std::pow(c, g) * std::pow(M + 0.5, gp + 1.0) / std::abs(gp + 1.0);
    }
    // Geometric (ARMA) decay.
    const double rho = coeffs.geometric_ratio().value_or(0.0);
    const double rho_g = std::pow(std::max(rho, 1e-12), g);
    if (rho_g >= 1.0) return std::numeric_limits<double>::infinity();
    const std::size_t idx = static_cast<std::size_t>(M);
    const double last = std::abs(coeffs.at(idx));
    // |a_i| <= B rho^{i-M} for i > M with B read off the last few terms.
    double b = last;
    for (std::size_t back = 1; back <= 4 && back <= idx; ++back)
        b = std::max(b, std::abs(coeffs.at(idx - back)) * std::pow(rho, double(back)));
    return std::pow(b, g) * rho_g / (1.0 - rho_g);
}

} // namespace

double required_truncation(const model::LinearProcessModel& m, double tail_fraction) {
    if (!(tail_fraction > 0.0) || !(tail_fraction < 1.0))
        throw domain_error("tail fraction must lie in (0,1)");
    const double g = family_power(m);
    const double total = m.coeffs.cached_power_sum(g, 1e-10);
    const double target = std::pow(tail_fraction, g) * total;

    if (m.coeffs.finite())
        return static_cast<double>(
            std::get<model::CoefficientSequence::Explicit>(m.coeffs.kind()).values.size() - 1);

    if (auto p = m.coeffs.tail_exponent()) {
        const double gp = g * (*p);
        if (gp >= -1.0) return std::numeric_limits<double>::infinity();
        const double c = m.coeffs.tail_constant().value_or(1.0);
        // pow(c,g) M^{gp+1} / |gp+1| = target
        return std::pow(target * std::abs(gp + 1.0) / std::pow(c, g), 1.0 / (gp + 1.0));
    }

    double m_try = 8;
    while (tail_power_sum(m, g, m_try) > target) {
        m_try *= 2;
        if (m_try > (1 << 26)) return std::numeric_limits<double>::infinity();
    }
    return m_try;
}

std::size_t default_truncation(const model::LinearProcessModel& m, double tail_fraction) {
    const double req = required_truncation(m, tail_fraction);
    if (!(req <= double(1 << 24))) {
        std::ostringstream os;
        os << "default truncation rule unsatisfiable: the tail-scale rule (fraction "
           << tail_fraction << ") needs M >= " << req
           << "; pass an explicit truncation and a looser tail fraction";
        throw config_error(os.str());
    }
    return std::max<std::size_t>(4096, static_cast<std::size_t>(std::ceil(req)));
}

// ---------------------------------------------------------------------------
// Convolutions
// ---------------------------------------------------------------------------

std::vector<double> convolve_direct(const std::vector<double>& coeffs,
                                    const std::vector<double>& innovations, std::size_t n) {
    const std::size_t m = coeffs.size() - 1;
    if (innovations.size() < n + m) throw domain_error("innovation stream too short");
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        const double* e = innovations.data() + k;
        // out[k] = sum_i a[i] * innov[k + m - i]
        for (std::size_t i = 0; i <= m; ++i) acc += coeffs[i] * e[m - i];
        out[k] = acc;
    }
    return out;
}

namespace {

std::mutex fftw_plan_mutex; // FFTW planning is not thread-safe

struct FftwBuffer {
    double* data = nullptr;
    explicit FftwBuffer(std::size_t count) : data(fftw_alloc_real(count)) {}
    ~FftwBuffer() { fftw_free(data); }
};
struct FftwComplexBuffer {
    fftw_complex* data = nullptr;
    explicit FftwComplexBuffer(std::size_t count) : data(fftw_alloc_complex(count)) {}
    ~FftwComplexBuffer() { fftw_free(data); }
};

} // namespace

std::vector<double> convolve_fft(const std::vector<double>& coeffs,
                                 const std::vector<double>& innovations, std::size_t n) {
    const std::size_t m = coeffs.size() - 1;
    if (innovations.size() < n + m) throw domain_error("innovation stream too short");

    std::size_t len = 1;
    while (len < n + 2 * m + 1) len <<= 1;
    const std::size_t spec_len = len / 2 + 1;

    FftwBuffer a(len), b(len), conv(len);
    FftwComplexBuffer fa(spec_len), fb(spec_len);
    std::fill(a.data, a.data + len, 0.0);
    std::fill(b.data, b.data + len, 0.0);
    std::copy(coeffs.begin(), coeffs.end(), a.data);
    std::copy(innovations.begin(), innovations.begin() + (n + m), b.data);

    fftw_plan pa, pb, pinv;
    {
        std::lock_guard<std::mutex> guard(fftw_plan_mutex);
        pa = fftw_plan_dft_r2c_1d(int(len), a.data, fa.data, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(int(len), b.data, fb.data, FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_1d(int(len), fa.data, conv.data, FFTW_ESTIMATE);
    }
    fftw_execute(pa);
    fftw_execute(pb);
    const double inv_len = 1.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < spec_len; ++i) {
        const double re = fa.data[i][0] * fb.data[i][0] - fa.data[i][1] * fb.data[i][1];
        const double im = fa.data[i][0] * fb.data[i][1] + fa.data[i][1] * fb.data[i][0];
        fa.data[i][0] = re * inv_len;
        fa.data[i][1] = im * inv_len;
    }
    fftw_execute(pinv);
    {
        std::lock_guard<std::mutex> guard(fftw_plan_mutex);
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pinv);
    }

    std::vector<double> out(n);
    std::copy(conv.data + m, conv.data + m + n, out.begin());
    return out;
}

// ---------------------------------------------------------------------------
// generate_path
// ---------------------------------------------------------------------------

SamplePath generate_path(const PathSpec& spec) {
    if (spec.n == 0) throw domain_error("path length must be >= 1");
    if (spec.truncation_m == 0) throw domain_error("truncation cutoff must be >= 1");

    const double g = family_power(spec.model);
    const double total = spec.model.coeffs.cached_power_sum(g, 1e-10);
    const double tail = tail_power_sum(spec.model, g, double(spec.truncation_m));
    if (!(tail <= std::pow(spec.tail_fraction, g) * total)) {
        std::ostringstream os;
        os << "truncation " << spec.truncation_m << " violates the tail-scale rule (fraction "
           << spec.tail_fraction << "); required M >= "
           << required_truncation(spec.model, spec.tail_fraction);
        throw config_error(os.str());
    }

    const std::size_t m = spec.truncation_m;
    const std::vector<double> coeffs = spec.model.coeffs.prefix(m + 1);
    const std::vector<double> eps =
        sample_innovations(spec.model.innovations, spec.n + m, spec.seed);

    // Direct convolution is the reference; the FFT route takes over when the
    // work n*(M+1) gets large.  The switch point is a fixed function of the
    // spec, so identical specs always take the same route.
    const bool use_fft = spec.n * (m + 1) > (std::size_t{1} << 24);
    SamplePath path;
    path.values = use_fft ? convolve_fft(coeffs, eps, spec.n) : convolve_direct(coeffs, eps, spec.n);
    path.provenance = spec;

    for (double v : path.values)
        if (!std::isfinite(v)) throw convergence_error("generated path contains non-finite values");
    return path;
}

} // namespace entroplin::simulate
