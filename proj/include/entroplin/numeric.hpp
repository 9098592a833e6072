#ifndef ENTROPLIN_NUMERIC_HPP
#define ENTROPLIN_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace entroplin {

// Kahan-compensated accumulator.  Used wherever a sum can exceed ~1e6 terms
// (pairwise kernel sums, replication reductions) so results stay stable under
// permutation and partitioning.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// SplitMix64 (Steele, Lea & Flood 2014): a counter-based 64-bit generator.
// Output k of stream s is mix(s + (k+1)*golden), so streams with distinct
// seeds are decorrelated by the full-avalanche finalizer.  Replication r of a
// seeded experiment draws from stream (base ^ r).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1): 53-bit mantissa, half-step offset.
    double uniform_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Adaptive Gauss-Kronrod integration of f over [a,b] with an absolute
// tolerance.  Throws convergence_error if the error estimate stays above the
// tolerance at the maximum refinement depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 15);

// Worker count resolution: explicit request, else ENTROPLIN_THREADS, else
// hardware concurrency.  0 means "auto" at every level.
unsigned resolve_thread_count(unsigned requested = 0);

// Runs fn(k) for k in [0, count).  Work items are claimed atomically but every
// item writes only state addressed by its own index, so results do not depend
// on the worker count.  Exceptions from workers are rethrown in the caller.
void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                        unsigned threads = 0);

} // namespace entroplin

#endif
