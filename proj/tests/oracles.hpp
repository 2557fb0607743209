#pragma once

// Reference computations for the tests, kept independent of the library:
// a dense quadratic minimizer for the interval energy, Simpson quadrature,
// and a seeded generator of random monotone data.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Minimal value of int_0^L v^2 + (v')^2 over v with v(0) = vm, v(L) = vp,
/// by direct minimization of the discrete quadratic form on N cells
/// (midpoint rule for v^2, exact differences for v'). The stationarity
/// system is tridiagonal; a hand-rolled Thomas sweep solves it.
inline double interval_energy(double vm, double vp, double L, std::size_t N = 2000) {
    const double h = L / static_cast<double>(N);
    const double diag = 4.0 / h + h;
    const double off = 0.5 * h - 2.0 / h;

    std::vector<double> v(N + 1, 0.0);
    v[0] = vm;
    v[N] = vp;
    const std::size_t M = N - 1;
    std::vector<double> rhs(M, 0.0);
    rhs[0] -= off * vm;
    rhs[M - 1] -= off * vp;

    std::vector<double> cp(M), dp(M);
    cp[0] = off / diag;
    dp[0] = rhs[0] / diag;
    for (std::size_t i = 1; i < M; ++i) {
        const double den = diag - off * cp[i - 1];
        cp[i] = off / den;
        dp[i] = (rhs[i] - off * dp[i - 1]) / den;
    }
    v[M] = dp[M - 1];
    for (std::size_t i = M - 1; i-- > 0;) v[i + 1] = dp[i] - cp[i] * v[i + 2];

    double e = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double d = v[i + 1] - v[i];
        const double s = 0.5 * (v[i] + v[i + 1]);
        e += d * d / h + h * s * s;
    }
    return e;
}

/// Composite Simpson rule; N is rounded up to the next even count.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t N = 2000) {
    if (N % 2) ++N;
    const double h = (b - a) / static_cast<double>(N);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < N; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Random nondecreasing nodal values on n cells: positive cell masses drawn
/// uniformly from [floor, 1], normalized to total 1. Deterministic per seed.
inline std::vector<double> random_monotone_values(std::size_t n, std::mt19937& rng,
                                                  double floor_mass = 0.05) {
    std::uniform_real_distribution<double> u(floor_mass, 1.0);
    std::vector<double> vals(n + 1, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        vals[j + 1] = u(rng);
        total += vals[j + 1];
    }
    double run = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        run += vals[j + 1] / total;
        vals[j + 1] = run;
    }
    vals[n] = 1.0;
    return vals;
}

/// Random smooth feasible path: cell densities 1 + sum of low-frequency modes
/// with time-varying amplitudes, normalized per slice. Values (m+1) x (n+1).
inline std::vector<double> random_smooth_path(std::size_t n, std::size_t m,
                                              std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double pi = 3.14159265358979323846;
    double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng), c1 = u(rng);
    std::vector<double> vals((m + 1) * (n + 1), 0.0);
    for (std::size_t k = 0; k <= m; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(m);
        double total = 0.0;
        std::vector<double> dens(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
            dens[j] = 1.0 + 0.4 * (a1 + (b1 - a1) * t) * std::sin(pi * x) +
                      0.3 * (a2 + (b2 - a2) * t) * std::sin(2.0 * pi * x) +
                      0.15 * c1 * t * (1.0 - t) * std::cos(pi * x);
            if (dens[j] < 0.05) dens[j] = 0.05;
            total += dens[j];
        }
        double* row = vals.data() + k * (n + 1);
        double run = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            run += dens[j] / total;
            row[j + 1] = run;
        }
        row[n] = 1.0;
    }
    return vals;
}

} // namespace oracle
