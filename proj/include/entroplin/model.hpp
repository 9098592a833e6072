#ifndef ENTROPLIN_MODEL_HPP
#define ENTROPLIN_MODEL_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace entroplin::model {

// ---------------------------------------------------------------------------
// Coefficient sequences of one-sided moving averages X_t = sum_i a_i e_{t-i}.
// ---------------------------------------------------------------------------

// FARIMA(0,d,0) weights a_i = Gamma(i+d) / (Gamma(d) Gamma(i+1)), computed by
// the stable recursion a_0 = 1, a_i = a_{i-1} (i-1+d)/i.
// Requires d < 1/2 and d not in {0,-1,-2,...}.
std::vector<double> farima_coefficients(double d, std::size_t count);

// Power-series coefficients of theta(z)/phi(z) for a causal ARMA model with
// phi(z) = 1 - ar[0] z - ... and theta(z) = 1 + ma[0] z + ....  Throws
// domain_error (naming the offending root modulus) if phi has a root on or
// inside the unit circle.
std::vector<double> arma_to_ma(const std::vector<double>& ar,
                               const std::vector<double>& ma, std::size_t count);

class CoefficientSequence {
public:
    struct Farima {
        double d;
    };
    struct CausalArma {
        std::vector<double> ar, ma;
    };
    struct Explicit {
        std::vector<double> values;
    };
    using Kind = std::variant<Farima, CausalArma, Explicit>;

    static CoefficientSequence farima(double d);
    static CoefficientSequence causal_arma(std::vector<double> ar, std::vector<double> ma);
    static CoefficientSequence from_values(std::vector<double> values);

    // Identity filter (a_0 = 1): the i.i.d. special case.
    CoefficientSequence() : CoefficientSequence(Explicit{{1.0}}) {}

    // a_0 .. a_{count-1}.  The sequence keeps an append-only cache behind an
    // internal lock, so shared instances may be read concurrently.
    std::vector<double> prefix(std::size_t count) const;
    double at(std::size_t i) const;

    // Exponent p of the algebraic tail a_i ~ c i^p, when one exists
    // analytically (Farima: p = d-1).  Explicit sequences and ARMA expansions
    // have no algebraic tail.
    std::optional<double> tail_exponent() const;
    // Matching constant c (Farima: 1/|Gamma(d)|).
    std::optional<double> tail_constant() const;
    // True when only finitely many coefficients are nonzero.
    bool finite() const;
    // Geometric decay bound |a_i| <= C rho^i for ARMA expansions; nullopt
    // otherwise.  rho is the inverse modulus of the smallest AR root.
    std::optional<double> geometric_ratio() const;

    // Memoized tail-corrected power sum; equivalent to
    // coeff_power_sum(*this, gamma, TailCorrected{rel_tol}).
    double cached_power_sum(double gamma, double rel_tol) const;

    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    explicit CoefficientSequence(Kind kind);

    Kind kind_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Innovation families.
// ---------------------------------------------------------------------------

enum class MomentOrder { two, four };

class InnovationFamily {
public:
    enum class Law { gaussian, symmetric_alpha_stable };

    // N(0, sigma^2): charfn exp(-sigma^2 lambda^2 / 2).
    static InnovationFamily gaussian(double sigma);
    // Symmetric alpha-stable: charfn exp(-c |lambda|^alpha), alpha in (0,2).
    // alpha = 1 is Cauchy with scale c; alpha -> 2 approaches N(0, 2c).
    static InnovationFamily symmetric_alpha_stable(double alpha, double scale_c = 1.0);

    Law law() const { return law_; }
    double sigma() const { return sigma_; }
    double alpha() const { return alpha_; }
    double scale_c() const { return scale_c_; }

    // Characteristic function; real-valued for both (symmetric) families.
    double charfn(double lambda) const;

    std::string describe() const;

private:
    Law law_ = Law::gaussian;
    double sigma_ = 1.0;   // gaussian only
    double alpha_ = 2.0;   // stable only
    double scale_c_ = 1.0; // stable only
};

std::complex<double> innovation_charfn(const InnovationFamily& family, double lambda);

// Regularity exponent gamma in E|e^{i lambda e} - phi(lambda)|^{2 or 4}
//   <= c (|lambda|^{2 gamma or 4 gamma} ^ 1), clamped into (0,1].
// Gaussian: 1 for both orders.  Stable: alpha/2 (order two), alpha/4 (four).
double regularity_gamma(const InnovationFamily& family, MomentOrder order);

// ---------------------------------------------------------------------------
// Linear-process models.
// ---------------------------------------------------------------------------

struct LinearProcessModel {
    CoefficientSequence coeffs;
    InnovationFamily innovations;

    std::string describe() const;
};

enum class Memory { short_range, long_range, undetermined };

struct MemoryClass {
    Memory value;
    std::string evidence;
};

// Sum mode for coefficient power sums.
struct TruncatedAt {
    std::size_t last_index; // sum over i = 0..last_index inclusive
};
struct TailCorrected {
    double rel_tol;
};
using SumMode = std::variant<TruncatedAt, TailCorrected>;

// S(gamma) = sum_i |a_i|^gamma, either literally truncated or with an
// algebraic tail correction.  For Farima with gamma = 2 in tail-corrected
// mode the exact hypergeometric closed form Gamma(1-2d)/Gamma^2(1-d) is
// returned.  Throws domain_error when the requested sum diverges.
double coeff_power_sum(const CoefficientSequence& coeffs, double gamma, const SumMode& mode);

// Characteristic function of the process, phi(lambda) = prod_i phi_e(a_i lambda).
// For the two implemented families this collapses to a closed form in the
// coefficient power sum, which is evaluated to relative tolerance rel_tol.
std::complex<double> process_charfn(const LinearProcessModel& model, double lambda,
                                    double rel_tol = 1e-10);

// Memory classification following the charfn-variance criterion: with
// sqrt(Var e^{i lambda a_i e}) ~ |a_i|^{g*} (g* = 1 Gaussian, alpha/2 stable)
// and tail exponent p, the process is short-range iff g* p < -1, long-range
// iff g* p >= -1 and 2 g* p < -1, and undetermined otherwise (which includes
// the ill-defined regime where even the variance sum diverges).
MemoryClass memory_class(const LinearProcessModel& model);

// Integral of the squared marginal density, closed form per family:
//   gaussian  : 1 / (2 s sqrt(pi)),      s^2 = sigma^2 sum a_i^2
//   stable    : Gamma(1/alpha) / (alpha pi (2C)^{1/alpha}),  C = c sum|a_i|^alpha
// `mode` selects how the coefficient sum is evaluated; the default is the
// tail-corrected limit.
double true_quadratic_functional(const LinearProcessModel& model,
                                 const SumMode& mode = TailCorrected{1e-10});

// (1/2pi) Integral of |charfn|^2 via adaptive quadrature.  The integration
// limit is grown from the callable's observed decay unless given explicitly;
// a tail that fails to decay raises convergence_error.
double quadratic_functional_quadrature(const std::function<std::complex<double>(double)>& charfn,
                                       double abs_tol);
double quadratic_functional_quadrature(const std::function<std::complex<double>(double)>& charfn,
                                       double abs_tol, double integration_limit);
double quadratic_functional_quadrature(const LinearProcessModel& model, double abs_tol);

// Marginal density by cosine-form Fourier inversion of the process charfn,
// clamped at zero against quadrature noise.
double density_at(const LinearProcessModel& model, double x, double abs_tol = 1e-9);

// Integration limit L such that the neglected charfn tail beyond [-L, L]
// contributes less than abs_tol to the inversion integrals above.
double charfn_integration_limit(const LinearProcessModel& model, double abs_tol);

} // namespace entroplin::model

#endif
