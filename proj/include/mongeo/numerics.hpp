#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "mongeo/errors.hpp"

namespace mongeo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kPiSquared = kPi * kPi;

/// Trapezoid weight: 1/2 at the ends, 1 inside.
inline double trap_weight(std::size_t i, std::size_t last) {
    return (i == 0 || i == last) ? 0.5 : 1.0;
}

/// Trapezoid rule over equally spaced samples with spacing dx.
inline double trapezoid(const std::vector<double>& f, double dx) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dx;
}

/// Solve a symmetric tridiagonal system with constant diagonal `diag` and
/// off-diagonal `off` (Thomas algorithm). Overwrites nothing; returns x.
/// Requires diagonal dominance, which holds for every system in this library.
inline std::vector<double> solve_tridiagonal_const(double diag, double off,
                                                   const std::vector<double>& rhs) {
    const std::size_t N = rhs.size();
    std::vector<double> cp(N), dp(N), x(N);
    if (N == 0) return x;
    cp[0] = off / diag;
    dp[0] = rhs[0] / diag;
    for (std::size_t i = 1; i < N; ++i) {
        const double m = diag - off * cp[i - 1];
        cp[i] = off / m;
        dp[i] = (rhs[i] - off * dp[i - 1]) / m;
    }
    x[N - 1] = dp[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}

/// Centered first differences on nodes, one-sided at both ends.
inline std::vector<double> diff_centered(const std::vector<double>& u, double dx) {
    const std::size_t n = u.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d[0] = (u[1] - u[0]) / dx;
    d[n - 1] = (u[n - 1] - u[n - 2]) / dx;
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (u[j + 1] - u[j - 1]) / (2.0 * dx);
    return d;
}

/// Piecewise-linear evaluation of nodal values on the unit grid at y in [0,1].
/// Caller guarantees y in range; ends are clamped against rounding.
inline double lerp_unit_grid_ptr(const double* vals, std::size_t count, double y) {
    const std::size_t n = count - 1;
    double p = y * static_cast<double>(n);
    if (p <= 0.0) return vals[0];
    if (p >= static_cast<double>(n)) return vals[n];
    const auto j = static_cast<std::size_t>(p);
    const double lam = p - static_cast<double>(j);
    return (1.0 - lam) * vals[j] + lam * vals[j + 1];
}

inline double lerp_unit_grid(const std::vector<double>& vals, double y) {
    return lerp_unit_grid_ptr(vals.data(), vals.size(), y);
}

/// Worker-thread budget: MONGEO_THREADS caps the hardware count when set.
inline unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("MONGEO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
    }
    return hw;
}

/// Run fn(begin, end) over disjoint chunks of [0, count). Deterministic:
/// chunk boundaries depend only on count and the thread budget, and callers
/// reduce per-chunk results in fixed order.
inline void parallel_chunks(std::size_t count,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(thread_budget(), std::max<std::size_t>(count, 1));
    if (workers <= 1 || count < 2048) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t step = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = std::min(count, static_cast<std::size_t>(w) * step);
        const std::size_t e = std::min(count, b + step);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool) th.join();
}

} // namespace mongeo
