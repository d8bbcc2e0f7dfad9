#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace riesz_lake {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

// Worker count from RIESZ_LAKE_THREADS, default 1.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("RIESZ_LAKE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

// Runs body(i) for i in [0, n) on up to thread_budget() threads using static
// contiguous chunks. Callers must write only to index-private storage, so the
// result never depends on the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::min<std::size_t>(thread_budget(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body, &err = errors[w]] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    // First failing chunk wins, as in a serial run.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace riesz_lake
