#include "entroplin/numeric.hpp"

#include "entroplin/errors.hpp"

#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace entroplin {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    double err = 0.0;
    // Boost's termination condition is relative; request a relative tolerance
    // scaled so the absolute target is met for O(1) integrals and check the
    // reported estimate against the absolute budget afterwards.
    const double span = std::abs(b - a);
    const double rel = abs_tol / std::max(1.0, span);
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, rel, &err);
    if (!(err <= abs_tol) && !(err <= std::abs(value) * 1e-10)) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "quadrature did not reach tolerance %.3g (error estimate %.3g)", abs_tol,
                      err);
        throw convergence_error(msg);
    }
    return value;
}

unsigned resolve_thread_count(unsigned requested) {
    if (requested != 0) return requested;
    if (const char* env = std::getenv("ENTROPLIN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn,
                        unsigned threads) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(threads), count));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&]() {
        for (;;) {
            if (stop.load(std::memory_order_relaxed)) return;
            const std::size_t k = next.fetch_add(1);
            if (k >= count) return;
            try {
                fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace entroplin
