#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mongeo/errors.hpp"
#include "mongeo/grid.hpp"
#include "mongeo/numerics.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

/// Momentum of a velocity profile: m = v - (1/4) v_xx, second difference in
/// the interior, m = v at the endpoints (the inversion pins them anyway).
inline std::vector<double> apply_helmholtz(const std::vector<double>& v, double h) {
    const std::size_t n1 = v.size();
    if (n1 < 3) throw DomainError("apply_helmholtz: need at least three nodes");
    std::vector<double> m(n1);
    m[0] = v[0];
    m[n1 - 1] = v[n1 - 1];
    const double c = 1.0 / (4.0 * h * h);
    for (std::size_t j = 1; j + 1 < n1; ++j)
        m[j] = v[j] - c * (v[j + 1] - 2.0 * v[j] + v[j - 1]);
    return m;
}

/// Invert v - (1/4) v_xx = m with v = 0 at both endpoints. The interior system
/// is symmetric positive definite with constant diagonals.
inline std::vector<double> helmholtz_solve(const std::vector<double>& m, double h) {
    const std::size_t n1 = m.size();
    if (n1 < 3) throw DomainError("helmholtz_solve: need at least three nodes");
    const double c = 1.0 / (4.0 * h * h);
    std::vector<double> rhs(m.begin() + 1, m.end() - 1);
    std::vector<double> v(n1, 0.0);
    const auto sol = solve_tridiagonal_const(1.0 + 2.0 * c, -c, rhs);
    std::copy(sol.begin(), sol.end(), v.begin() + 1);
    return v;
}

/// H^1-type invariant of the evolution: integral of v^2 + (1/4) v_x^2.
inline double ch_energy(const std::vector<double>& v, double h) {
    const auto vx = diff_centered(v, h);
    std::vector<double> dens(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) dens[j] = v[j] * v[j] + 0.25 * vx[j] * vx[j];
    return trapezoid(dens, h);
}

/// Velocity tendency of m_t + v m_x + 2 m v_x = 0, mapped back through the
/// Helmholtz inversion: dv/dt = solve(-(v m_x + 2 m v_x)).
inline std::vector<double> ch_tendency(const std::vector<double>& v, double h) {
    const auto m = apply_helmholtz(v, h);
    const auto mx = diff_centered(m, h);
    const auto vx = diff_centered(v, h);
    std::vector<double> rhs(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) rhs[j] = -(v[j] * mx[j] + 2.0 * m[j] * vx[j]);
    return helmholtz_solve(rhs, h);
}

struct EvolveOptions {
    double guard = 0.5; // reject a step once max|v_x| exceeds guard / dt
};

/// Recorded evolution. Rows 0..steps_completed of `states` are valid; on
/// blowup the remaining rows were never produced. The guard firing is the
/// expected outcome for steepening data, not an error.
struct EvolveResult {
    SpaceGrid space;
    TimeGrid time;
    std::vector<double> states;       // (steps_completed + 1) x (n + 1)
    std::vector<double> energy_trace; // one entry per recorded state
    std::size_t steps_completed = 0;
    bool blowup = false;
    std::size_t blowup_step = 0; // step whose start state tripped the guard

    const double* state(std::size_t k) const { return states.data() + k * space.nodes(); }
    std::vector<double> state_values(std::size_t k) const {
        return std::vector<double>(state(k), state(k) + space.nodes());
    }

    /// Recorded rows as a velocity field over the (possibly truncated) grid.
    /// Requires the initial profile to meet the boundary exactly.
    VelocityField field() const {
        if (steps_completed == 0)
            throw DomainError("EvolveResult: no completed steps to build a field from");
        const TimeGrid tg{steps_completed, time.dt() * static_cast<double>(steps_completed)};
        return VelocityField(space, tg,
                             std::vector<double>(states.begin(),
                                                 states.begin() +
                                                     (steps_completed + 1) * space.nodes()));
    }

    /// Bilinear evaluation over the recorded rows; t is clamped to the
    /// recorded range, x to [0,1].
    double eval(double t, double x) const {
        const double dt = time.dt();
        double tau = std::clamp(t / dt, 0.0, static_cast<double>(steps_completed));
        const auto k = static_cast<std::size_t>(
            std::min(tau, static_cast<double>(steps_completed == 0 ? 0 : steps_completed - 1)));
        const double frac = tau - static_cast<double>(k);
        const std::size_t k2 = std::min(k + 1, steps_completed);
        const double lo = lerp_unit_grid_ptr(state(k), space.nodes(), std::clamp(x, 0.0, 1.0));
        const double hi = lerp_unit_grid_ptr(state(k2), space.nodes(), std::clamp(x, 0.0, 1.0));
        return (1.0 - frac) * lo + frac * hi;
    }
};

/// Classical RK4 on the velocity form of the equation. Steepening is detected
/// from the slope at the start of each step; the step is refused and the run
/// reported as a blowup once |v_x| dt would exceed the guard.
inline EvolveResult ch_evolve(const SpaceGrid& space, const TimeGrid& time,
                              std::vector<double> v0, const EvolveOptions& opt = {}) {
    if (v0.size() != space.nodes()) throw GridMismatch("ch_evolve: profile does not match grid");
    const double h = space.h();
    const double dt = time.dt();

    EvolveResult res;
    res.space = space;
    res.time = time;
    res.states.reserve((time.m + 1) * space.nodes());
    res.states.insert(res.states.end(), v0.begin(), v0.end());
    res.energy_trace.push_back(ch_energy(v0, h));

    std::vector<double> v = std::move(v0);
    for (std::size_t k = 0; k < time.m; ++k) {
        const auto vx = diff_centered(v, h);
        double steep = 0.0;
        for (double s : vx) steep = std::max(steep, std::abs(s));
        if (steep > opt.guard / dt) {
            res.blowup = true;
            res.blowup_step = k;
            res.steps_completed = k;
            return res;
        }
        const auto k1 = ch_tendency(v, h);
        std::vector<double> stage(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) stage[j] = v[j] + 0.5 * dt * k1[j];
        const auto k2 = ch_tendency(stage, h);
        for (std::size_t j = 0; j < v.size(); ++j) stage[j] = v[j] + 0.5 * dt * k2[j];
        const auto k3 = ch_tendency(stage, h);
        for (std::size_t j = 0; j < v.size(); ++j) stage[j] = v[j] + dt * k3[j];
        const auto k4 = ch_tendency(stage, h);
        for (std::size_t j = 0; j < v.size(); ++j)
            v[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        res.states.insert(res.states.end(), v.begin(), v.end());
        res.energy_trace.push_back(ch_energy(v, h));
        res.steps_completed = k + 1;
    }
    return res;
}

/// Mollified peaked pair height*(e^{-|x - x_lo|/w} - e^{-|x - x_hi|/w}) with
/// the linear ramp through its endpoint values removed, so the profile meets
/// the boundary exactly. The correction is exponentially small inside.
inline std::vector<double> peakon_pair_profile(const SpaceGrid& space, double height,
                                               double width, double x_lo = 0.4,
                                               double x_hi = 0.6) {
    std::vector<double> v(space.nodes());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = space.node(j);
        v[j] = height * (std::exp(-std::abs(x - x_lo) / width) -
                         std::exp(-std::abs(x - x_hi) / width));
    }
    const double a = v.front();
    const double b = v.back();
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double x = space.node(j);
        v[j] -= a * (1.0 - x) + b * x;
    }
    return v;
}

/// Pressure over the recorded states:
///   p = -1/2 [ 1/2 v_tx + 1/4 v_x^2 + 1/2 v v_xx - v^2 ],
/// with v_tx a centered time difference of the centered space difference
/// (one-sided, first order, at the first and last recorded rows). The
/// companion momentum balance v_t + 2 v v_x + p_x = 0 is not imposed; its
/// defect over interior nodes is reported as consistency_residual, and a
/// large value flags data that does not solve the equation.
struct PressureField {
    SpaceGrid space;
    TimeGrid time;              // grid of the recorded rows, not the requested one
    std::vector<double> values; // (rows) x (n+1)
    double consistency_residual = 0.0;

    const double* row(std::size_t k) const { return values.data() + k * space.nodes(); }
    std::vector<double> row_values(std::size_t k) const {
        return std::vector<double>(row(k), row(k) + space.nodes());
    }
};

inline PressureField compute_pressure(const EvolveResult& ev) {
    const std::size_t rows = ev.steps_completed + 1;
    if (rows < 2) throw DomainError("compute_pressure: need at least two recorded states");
    const std::size_t n1 = ev.space.nodes();
    const double h = ev.space.h();
    const double dt = ev.time.dt();

    std::vector<std::vector<double>> vx(rows), vt(rows);
    for (std::size_t k = 0; k < rows; ++k) vx[k] = diff_centered(ev.state_values(k), h);
    for (std::size_t k = 0; k < rows; ++k) {
        vt[k].resize(n1);
        for (std::size_t j = 0; j < n1; ++j) {
            if (k == 0)
                vt[k][j] = (ev.state(1)[j] - ev.state(0)[j]) / dt;
            else if (k + 1 == rows)
                vt[k][j] = (ev.state(rows - 1)[j] - ev.state(rows - 2)[j]) / dt;
            else
                vt[k][j] = (ev.state(k + 1)[j] - ev.state(k - 1)[j]) / (2.0 * dt);
        }
    }

    PressureField pf;
    pf.space = ev.space;
    pf.time = TimeGrid{rows - 1, dt * static_cast<double>(rows - 1)};
    pf.values.assign(rows * n1, 0.0);
    for (std::size_t k = 0; k < rows; ++k) {
        const double* v = ev.state(k);
        std::vector<double> vtx(n1);
        for (std::size_t j = 0; j < n1; ++j) {
            if (k == 0)
                vtx[j] = (vx[1][j] - vx[0][j]) / dt;
            else if (k + 1 == rows)
                vtx[j] = (vx[rows - 1][j] - vx[rows - 2][j]) / dt;
            else
                vtx[j] = (vx[k + 1][j] - vx[k - 1][j]) / (2.0 * dt);
        }
        double* p = pf.values.data() + k * n1;
        for (std::size_t j = 0; j < n1; ++j) {
            const std::size_t i = (j == 0) ? 1 : (j + 1 == n1 ? n1 - 2 : j);
            const double vxx = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
            p[j] = -0.5 *
                   (0.5 * vtx[j] + 0.25 * vx[k][j] * vx[k][j] + 0.5 * v[j] * vxx - v[j] * v[j]);
        }
    }

    // momentum-balance defect, interior rows and interior nodes
    for (std::size_t k = 1; k + 1 < rows; ++k) {
        const auto px = diff_centered(pf.row_values(k), h);
        const double* v = ev.state(k);
        for (std::size_t j = 1; j + 1 < n1; ++j) {
            const double r = vt[k][j] + 2.0 * v[j] * vx[k][j] + px[j];
            pf.consistency_residual = std::max(pf.consistency_residual, std::abs(r));
        }
    }
    return pf;
}

struct Certificate {
    double T = 0.0;
    double sup_opnorm = 0.0; // sup over nodes of the curvature block norm
    double margin = 0.0;     // pi^2 - T^2 * sup_opnorm
    enum class Verdict { strict_minimizer, minimizer, inconclusive } verdict =
        Verdict::inconclusive;
};

namespace detail {

/// Spectral norm of the symmetric block [[pxx, 2 px], [2 px, 2 p]]: largest
/// absolute eigenvalue from the closed form.
inline double pressure_block_norm(double pxx, double px, double p) {
    const double a = pxx;
    const double b = 2.0 * px;
    const double c = 2.0 * p;
    const double mid = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return std::max(std::abs(mid + rad), std::abs(mid - rad));
}

inline Certificate seal_certificate(double T, double sup) {
    Certificate cert;
    cert.T = T;
    cert.sup_opnorm = sup;
    cert.margin = kPiSquared - T * T * sup;
    cert.verdict = (cert.margin > 0.0)   ? Certificate::Verdict::strict_minimizer
                   : (cert.margin == 0.0) ? Certificate::Verdict::minimizer
                                          : Certificate::Verdict::inconclusive;
    return cert;
}

} // namespace detail

/// Second-variation test on one pressure slice: a path of duration T is
/// certified once T^2 sup||M|| stays below pi^2 (strictly below: unique
/// minimizer; equality: minimizer; above: no conclusion).
inline Certificate certificate_from_pressure(const std::vector<double>& p, double h, double T) {
    if (p.size() < 3) throw DomainError("certificate_from_pressure: need at least three nodes");
    const auto px = diff_centered(p, h);
    double sup = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const std::size_t i = (j == 0) ? 1 : (j + 1 == p.size() ? p.size() - 2 : j);
        const double pxx = (p[i + 1] - 2.0 * p[i] + p[i - 1]) / (h * h);
        sup = std::max(sup, detail::pressure_block_norm(pxx, px[j], p[j]));
    }
    return detail::seal_certificate(T, sup);
}

/// Certificate over a computed pressure field. The first and last time rows
/// use one-sided stencils, so they are excluded from the sup by default.
inline Certificate certificate_from_pressure(const PressureField& pf, double T,
                                             bool include_time_ends = false) {
    const std::size_t rows = pf.time.m + 1;
    const double h = pf.space.h();
    const std::size_t k_begin = (include_time_ends || rows < 3) ? 0 : 1;
    const std::size_t k_end = (include_time_ends || rows < 3) ? rows : rows - 1;
    double sup = 0.0;
    for (std::size_t k = k_begin; k < k_end; ++k) {
        const auto cert = certificate_from_pressure(pf.row_values(k), h, T);
        sup = std::max(sup, cert.sup_opnorm);
    }
    return detail::seal_certificate(T, sup);
}

/// End-to-end: pressure of the recorded evolution, then the certificate for
/// horizon T.
inline Certificate minimality_certificate(const EvolveResult& ev, double T,
                                          bool include_time_ends = false) {
    return certificate_from_pressure(compute_pressure(ev), T, include_time_ends);
}

} // namespace mongeo
