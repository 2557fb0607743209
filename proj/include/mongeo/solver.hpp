#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mongeo/energy.hpp"
#include "mongeo/errors.hpp"
#include "mongeo/hellinger.hpp"
#include "mongeo/monotone_map.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

struct SolverOptions {
    std::size_t max_iters = 20000;
    double grad_tol = 1e-6;      // sup norm of the gradient at free nodes
    double density_floor = 1e-8; // cell-density floor, as a fraction of the cell width
    enum class LineSearch { backtracking } line_search = LineSearch::backtracking;
    enum class Init { hellinger, linear, given } init = Init::hellinger;
};

/// Objective value and exact nodal gradient of the discrete action. Cell
/// increments are floored at delta*h so root densities stay differentiable;
/// iterates produced by the solver respect the floor, so the floor never
/// changes the value along the descent. Boundary rows and columns of the
/// gradient are zeroed: they are fixed by the endpoint data.
struct ActionEval {
    double value = 0.0;
    std::vector<double> gradient; // (m+1) x (n+1), row-major
};

inline ActionEval discrete_action(const SpaceGrid& space, const TimeGrid& time,
                                  const std::vector<double>& values, double delta = 1e-8) {
    const std::size_t n = space.n;
    const std::size_t m = time.m;
    if (values.size() != (m + 1) * (n + 1))
        throw GridMismatch("discrete_action: value array does not match grids");
    const double h = space.h();
    const double dt = time.dt();
    const double floor_inc = delta * h;

    ActionEval ev;
    ev.gradient.assign(values.size(), 0.0);

    // root densities per time level and cell
    std::vector<double> s((m + 1) * n);
    for (std::size_t k = 0; k <= m; ++k) {
        const double* row = values.data() + k * (n + 1);
        for (std::size_t j = 0; j < n; ++j)
            s[k * n + j] = std::sqrt(std::max(row[j + 1] - row[j], floor_inc) / h);
    }

    double* G = ev.gradient.data();
    for (std::size_t k = 0; k < m; ++k) {
        const double* lo = values.data() + k * (n + 1);
        const double* hi = lo + (n + 1);
        double* g_lo = G + k * (n + 1);
        double* g_hi = g_lo + (n + 1);
        for (std::size_t j = 0; j < n; ++j) {
            const double s_lo = s[k * n + j];
            const double s_hi = s[(k + 1) * n + j];
            const double dts = (s_hi - s_lo) / dt;
            const double sbar = 0.5 * (s_lo + s_hi);
            const double dtp = 0.5 * ((hi[j] - lo[j]) + (hi[j + 1] - lo[j + 1])) / dt;
            ev.value += h * dt * (dtp * dtp * sbar * sbar + dts * dts);

            const double c_fr = 2.0 * h * dts;              // w.r.t. s_hi; minus for s_lo
            const double c_kin = h * dt * dtp * dtp * sbar; // w.r.t. s at both levels
            const double c_t = 2.0 * h * dtp * sbar * sbar; // w.r.t. cell mean, hi level

            g_hi[j] += 0.5 * c_t;
            g_hi[j + 1] += 0.5 * c_t;
            g_lo[j] -= 0.5 * c_t;
            g_lo[j + 1] -= 0.5 * c_t;

            const double w_lo = (c_kin - c_fr) / (2.0 * h * s_lo);
            const double w_hi = (c_kin + c_fr) / (2.0 * h * s_hi);
            g_lo[j + 1] += w_lo;
            g_lo[j] -= w_lo;
            g_hi[j + 1] += w_hi;
            g_hi[j] -= w_hi;
        }
    }
    for (std::size_t j = 0; j <= n; ++j) {
        G[j] = 0.0;
        G[m * (n + 1) + j] = 0.0;
    }
    for (std::size_t k = 0; k <= m; ++k) {
        G[k * (n + 1)] = 0.0;
        G[k * (n + 1) + n] = 0.0;
    }
    return ev;
}

inline ActionEval discrete_action(const PathGrid& p, double delta = 1e-8) {
    return discrete_action(p.space, p.time, p.values, delta);
}

namespace detail {

/// Clamp a slice's increments to the floor and renormalize to unit mass.
/// Identity on rows that are already feasible, so projecting is idempotent.
inline void project_slice(double* row, std::size_t n, double floor_inc) {
    bool feasible = (row[0] == 0.0 && row[n] == 1.0);
    for (std::size_t j = 0; feasible && j < n; ++j)
        feasible = (row[j + 1] - row[j] >= floor_inc);
    if (feasible) return;
    double total = 0.0;
    double prev = row[0];
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::max(row[j + 1] - prev, floor_inc);
        prev = row[j + 1];
        row[j + 1] = w; // stash the increment in the upper node slot
        total += w;
    }
    double run = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        run += row[j] / total;
        row[j] = run;
    }
    row[0] = 0.0;
    row[n] = 1.0;
}

} // namespace detail

struct GeodesicResult {
    PathGrid path;
    EnergyBreakdown energy;     // strict-mode evaluation of the final path
    double distance = 0.0;      // sqrt(energy.total())
    std::size_t iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    bool near_degenerate = false; // some cell density ended pinned at the floor
};

/// Minimize the discrete action over monotone paths joining two maps.
/// Projected gradient descent with a Barzilai-Borwein trial step and an
/// Armijo backtracking line search; the energy decreases monotonically.
/// `initial` is consulted only under Init::given.
inline GeodesicResult solve_geodesic(const MonotoneMap& from, const MonotoneMap& to,
                                     const TimeGrid& time,
                                     const SolverOptions& opt = SolverOptions{},
                                     const PathGrid* initial = nullptr) {
    require_same(from.grid, to.grid, "solve_geodesic");
    const std::size_t n = from.grid.n;
    const std::size_t m = time.m;
    const double h = from.grid.h();
    const double floor_inc = opt.density_floor * h;

    std::vector<double> x;
    if (opt.init == SolverOptions::Init::given) {
        if (!initial) throw DomainError("solve_geodesic: Init::given without a path");
        require_same(initial->space, from.grid, "solve_geodesic");
        require_same(initial->time, time, "solve_geodesic");
        x = initial->values;
    } else if (opt.init == SolverOptions::Init::hellinger) {
        x = hellinger_path(from, to, time).values;
    } else {
        x.resize((m + 1) * (n + 1));
        for (std::size_t k = 0; k <= m; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(m);
            for (std::size_t j = 0; j <= n; ++j)
                x[k * (n + 1) + j] = (1.0 - t) * from.values[j] + t * to.values[j];
        }
    }
    // Pin the endpoint rows to the maps and spread the (rounding-level) defect
    // linearly through the interior, so equal endpoints give a constant path.
    std::vector<double> d0(n + 1), dm(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        d0[j] = from.values[j] - x[j];
        dm[j] = to.values[j] - x[m * (n + 1) + j];
    }
    for (std::size_t k = 1; k < m; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(m);
        for (std::size_t j = 0; j <= n; ++j)
            x[k * (n + 1) + j] += d0[j] + t * (dm[j] - d0[j]);
    }
    for (std::size_t j = 0; j <= n; ++j) {
        x[j] = from.values[j];
        x[m * (n + 1) + j] = to.values[j];
    }
    for (std::size_t k = 1; k < m; ++k) detail::project_slice(x.data() + k * (n + 1), n, floor_inc);

    auto project = [&](std::vector<double>& v) {
        for (std::size_t k = 1; k < m; ++k)
            detail::project_slice(v.data() + k * (n + 1), n, floor_inc);
        for (std::size_t j = 0; j <= n; ++j) {
            v[j] = from.values[j];
            v[m * (n + 1) + j] = to.values[j];
        }
    };

    ActionEval cur = discrete_action(from.grid, time, x, opt.density_floor);
    double alpha = 1e-2;
    std::vector<double> trial(x.size()), x_prev, g_prev;

    GeodesicResult res;
    std::size_t it = 0;
    for (; it < opt.max_iters; ++it) {
        double gnorm = 0.0;
        for (double g : cur.gradient) gnorm = std::max(gnorm, std::abs(g));
        res.grad_norm = gnorm;
        if (gnorm <= opt.grad_tol) {
            res.converged = true;
            break;
        }

        bool accepted = false;
        double step = alpha;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - step * cur.gradient[i];
            project(trial);
            double decrease = 0.0; // <g, x - trial>: predicted gain of the projected step
            for (std::size_t i = 0; i < x.size(); ++i)
                decrease += cur.gradient[i] * (x[i] - trial[i]);
            if (decrease > 0.0) {
                const ActionEval ev =
                    discrete_action(from.grid, time, trial, opt.density_floor);
                if (ev.value <= cur.value - 1e-4 * decrease) {
                    x_prev = std::move(x);
                    g_prev = std::move(cur.gradient);
                    x = trial;
                    trial = std::move(x_prev); // recycle the buffer
                    cur = ev;
                    // Barzilai-Borwein step from the accepted move
                    double sy = 0.0, ss = 0.0;
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        const double dx = x[i] - trial[i];
                        sy += dx * (cur.gradient[i] - g_prev[i]);
                        ss += dx * dx;
                    }
                    alpha = (sy > 0.0) ? std::clamp(ss / sy, 1e-12, 1e6) : step;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break; // line search stalled at the floor of double precision
    }
    res.iterations = it;

    double min_inc = 1.0;
    for (std::size_t k = 0; k <= m; ++k)
        for (std::size_t j = 0; j < n; ++j)
            min_inc = std::min(min_inc, x[k * (n + 1) + j + 1] - x[k * (n + 1) + j]);
    res.near_degenerate = (min_inc <= 2.0 * floor_inc);

    res.path = PathGrid(from.grid, time, std::move(x));
    res.energy = lagrangian_energy(res.path, FisherRaoOptions::strict());
    res.distance = std::sqrt(std::max(0.0, res.energy.total()));
    return res;
}

enum class ElReading {
    from_variations, // quarter term is d/dx of the squared log-density rate
    as_printed       // quarter term is the plain mixed derivative of log density
};

/// Sup norm of the interior Euler-Lagrange defect of a path. The residual is
///   -2 phi_tt rho - 2 phi_t rho_t - d/dx(phi_t^2) + 1/2 d2/dt2(dlam) + Q
/// with lam = log rho, dlam its one-sided x-derivative at nodes, and Q the
/// quarter term selected by the reading. Only the variational reading decays
/// under refinement on minimizers.
inline double el_residual(const PathGrid& p, ElReading reading = ElReading::from_variations) {
    const std::size_t n = p.space.n;
    const std::size_t m = p.time.m;
    if (n < 3 || m < 2) throw DomainError("el_residual: grid too small for interior stencils");
    const double h = p.space.h();
    const double dt = p.time.dt();

    // cell data per time level
    std::vector<double> c((m + 1) * n), lam((m + 1) * n);
    for (std::size_t k = 0; k <= m; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const double inc = (p.at(k, j + 1) - p.at(k, j)) / h;
            if (inc <= 0.0) throw DegenerateDensity("el_residual: vanishing cell density");
            c[k * n + j] = inc;
            lam[k * n + j] = std::log(inc);
        }

    auto rho_node = [&](std::size_t k, std::size_t j) {
        return 0.5 * (c[k * n + j - 1] + c[k * n + j]);
    };
    auto dtp = [&](std::size_t k, std::size_t j) {
        return (p.at(k + 1, j) - p.at(k - 1, j)) / (2.0 * dt);
    };
    auto dxlam = [&](std::size_t k, std::size_t j) {
        return (lam[k * n + j] - lam[k * n + j - 1]) / h;
    };
    auto mu_cell = [&](std::size_t k, std::size_t j) { // d/dt log rho per cell
        return (lam[(k + 1) * n + j] - lam[(k - 1) * n + j]) / (2.0 * dt);
    };

    double worst = 0.0;
    for (std::size_t k = 1; k < m; ++k)
        for (std::size_t j = 1; j < n; ++j) {
            const double phi_tt =
                (p.at(k + 1, j) - 2.0 * p.at(k, j) + p.at(k - 1, j)) / (dt * dt);
            const double rho_t = (rho_node(k + 1, j) - rho_node(k - 1, j)) / (2.0 * dt);
            const double dxp2 =
                (dtp(k, j + 1) * dtp(k, j + 1) - dtp(k, j - 1) * dtp(k, j - 1)) / (2.0 * h);
            const double dlam_tt =
                (dxlam(k + 1, j) - 2.0 * dxlam(k, j) + dxlam(k - 1, j)) / (dt * dt);

            double quarter;
            if (reading == ElReading::from_variations) {
                const double mu_r = mu_cell(k, j);
                const double mu_l = mu_cell(k, j - 1);
                quarter = 0.25 * (mu_r * mu_r - mu_l * mu_l) / h;
            } else {
                quarter = 0.25 * (dxlam(k + 1, j) - dxlam(k - 1, j)) / (2.0 * dt);
            }

            const double r = -2.0 * phi_tt * rho_node(k, j) - 2.0 * dtp(k, j) * rho_t -
                             dxp2 + 0.5 * dlam_tt + quarter;
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

struct MetricDiagnostics {
    double d_ab = 0.0, d_ba = 0.0; // forward and reversed solves for (a, b)
    double d_ac = 0.0, d_bc = 0.0; // the legs of the triangle check
    double d_ab_right = 0.0;       // (a, b) with both endpoints composed with eta
    double sup_ab = 0.0;           // max nodal |a - b|

    double triangle_slack = 0.0;  // d_ac - d_ab - d_bc, tolerated up to tol_solver
    double tol_solver = 0.0;      // 2% of d_ab + d_bc
    double symmetry_gap = 0.0;    // |d_ab - d_ba| / d_ab
    double invariance_gap = 0.0;  // |d_ab - d_ab_right| / d_ab
    double sup_ratio = 0.0;       // sup_ab / (2 d_ab), must stay <= 1
    double rel_tol = 0.02;

    bool triangle_ok() const { return triangle_slack <= tol_solver; }
    bool symmetry_ok() const { return symmetry_gap <= rel_tol; }
    bool invariance_ok() const { return invariance_gap <= rel_tol; }
    bool sup_dominated() const { return sup_ratio <= 1.0; }
    bool ok() const {
        return triangle_ok() && symmetry_ok() && invariance_ok() && sup_dominated();
    }
};

/// Distance-function sanity on a triple of maps: triangle inequality through
/// c, symmetry of the (a, b) solve, invariance under composing both endpoints
/// on the right with eta, and domination of the sup norm by twice the
/// distance. Violations are report entries, never exceptions.
inline MetricDiagnostics metric_diagnostics(const MonotoneMap& a, const MonotoneMap& b,
                                            const MonotoneMap& c, const MonotoneMap& eta,
                                            const TimeGrid& time,
                                            const SolverOptions& opt = SolverOptions{}) {
    MetricDiagnostics diag;
    diag.d_ab = solve_geodesic(a, b, time, opt).distance;
    diag.d_ba = solve_geodesic(b, a, time, opt).distance;
    diag.d_ac = solve_geodesic(a, c, time, opt).distance;
    diag.d_bc = solve_geodesic(b, c, time, opt).distance;
    diag.d_ab_right = solve_geodesic(compose(a, eta), compose(b, eta), time, opt).distance;

    for (std::size_t j = 0; j <= a.grid.n; ++j)
        diag.sup_ab = std::max(diag.sup_ab, std::abs(a.values[j] - b.values[j]));

    diag.tol_solver = diag.rel_tol * (diag.d_ab + diag.d_bc);
    diag.triangle_slack = diag.d_ac - diag.d_ab - diag.d_bc;
    const double ref = std::max(diag.d_ab, 1e-30);
    diag.symmetry_gap = std::abs(diag.d_ab - diag.d_ba) / ref;
    diag.invariance_gap = std::abs(diag.d_ab - diag.d_ab_right) / ref;
    diag.sup_ratio = diag.sup_ab / std::max(2.0 * diag.d_ab, 1e-30);
    return diag;
}

} // namespace mongeo
