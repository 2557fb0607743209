#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "mongeo/errors.hpp"
#include "mongeo/jump_record.hpp"
#include "mongeo/numerics.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

/// total = kinetic + fisher_rao + jump, kept exact by construction.
struct EnergyBreakdown {
    double kinetic = 0.0;
    double fisher_rao = 0.0;
    double jump = 0.0;

    double total() const { return kinetic + fisher_rao + jump; }
};

/// Handling of the density in the Fisher-Rao integrand. strict evaluates the
/// one-homogeneous extension exactly (+inf off the closed domain); floored
/// substitutes a <- max(a, epsilon) and exists for line searches only, since it
/// lets mass move through zero-density regions at finite cost.
struct FisherRaoOptions {
    enum class Mode { strict, floored };
    Mode mode = Mode::strict;
    double epsilon = 0.0;

    static FisherRaoOptions strict() { return {}; }
    static FisherRaoOptions floored(double eps = 1e-10) {
        FisherRaoOptions o;
        o.mode = Mode::floored;
        o.epsilon = eps;
        return o;
    }
};

/// One-homogeneous integrand r(a,b) = b^2/(4a) on {a>0}, 0 at (0,0), +inf
/// elsewhere on the closure.
inline double fr_integrand(double a, double b, const FisherRaoOptions& opt = {}) {
    if (opt.mode == FisherRaoOptions::Mode::floored) a = std::max(a, opt.epsilon);
    if (a > 0.0) return b * b / (4.0 * a);
    if (a == 0.0 && b == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
}

/// Eulerian energy of a velocity field: trapezoid in x and t of
/// v^2 + (1/4)(dx v)^2, centered differences inside, one-sided at x = 0, 1.
inline double eulerian_energy(const VelocityField& v) {
    const std::size_t n = v.space.n, m = v.time.m;
    const double h = v.space.h(), dt = v.time.dt();
    double acc = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const double* r = v.row(k);
        double sx = 0.0;
        for (std::size_t j = 0; j <= n; ++j) {
            double dxv;
            if (j == 0)
                dxv = (r[1] - r[0]) / h;
            else if (j == n)
                dxv = (r[n] - r[n - 1]) / h;
            else
                dxv = (r[j + 1] - r[j - 1]) / (2.0 * h);
            sx += trap_weight(j, n) * (r[j] * r[j] + 0.25 * dxv * dxv);
        }
        acc += trap_weight(k, m) * sx * h;
    }
    return acc * dt;
}

namespace detail {

/// Shared cell stencils of the action discretization. Per space-time cell (k,j):
///   dt_phi  = forward difference of the cell-averaged value (cell midpoint);
///   s       = sqrt of the cell density at each time level;
///   density = ((s_k + s_{k+1})/2)^2, the square of the mean root density --
///             the unique centering that makes kinetic + fisher_rao equal the
///             flat energy of the square-root lift exactly;
///   dtx_phi = mixed difference = forward time difference of the cell density.
struct CellStencil {
    double dt_phi, s_lo, s_hi, dtx_phi;

    double density() const {
        const double sb = 0.5 * (s_lo + s_hi);
        return sb * sb;
    }
};

inline CellStencil cell_stencil(const PathGrid& p, std::size_t k, std::size_t j) {
    const double h = p.space.h(), dt = p.time.dt();
    const double a0 = p.at(k, j), a1 = p.at(k, j + 1);
    const double b0 = p.at(k + 1, j), b1 = p.at(k + 1, j + 1);
    CellStencil c;
    c.dt_phi = ((b0 - a0) + (b1 - a1)) / (2.0 * dt); // node-wise first: exact on rest
    c.s_lo = std::sqrt(std::max(a1 - a0, 0.0) / h);
    c.s_hi = std::sqrt(std::max(b1 - b0, 0.0) / h);
    c.dtx_phi = ((b1 - b0) - (a1 - a0)) / (h * dt);
    return c;
}

} // namespace detail

/// Action of a path: midpoint quadrature over space-time cells of
/// (dt phi)^2 density + r(density, dtx phi), with the shared stencils above.
/// jump is always 0 here. With the shared stencils a vanishing cell density
/// forces a vanishing mixed difference, so strict mode cannot throw on a valid
/// path; the guard stays for documentation of the contract.
inline EnergyBreakdown lagrangian_energy(const PathGrid& p,
                                         const FisherRaoOptions& opt = {}) {
    const std::size_t n = p.space.n, m = p.time.m;
    const double h = p.space.h(), dt = p.time.dt();
    EnergyBreakdown e;
    for (std::size_t k = 0; k < m; ++k) {
        double kin = 0.0, fr = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = detail::cell_stencil(p, k, j);
            const double a = c.density();
            kin += c.dt_phi * c.dt_phi * a;
            const double r = fr_integrand(a, c.dtx_phi, opt);
            if (std::isinf(r))
                throw DegenerateDensity("lagrangian_energy: zero density with moving mass at cell (" +
                                        std::to_string(k) + "," + std::to_string(j) + ")");
            fr += r;
        }
        e.kinetic += kin * h * dt;
        e.fisher_rao += fr * h * dt;
    }
    return e;
}

/// Square-root lift of a path, cell-centered: z = s * exp(i * theta) with
/// s the root cell density and theta the cell-averaged value. Row-major
/// (m+1) x n complex samples.
inline std::vector<std::complex<double>> sqrt_lift(const PathGrid& p) {
    const std::size_t n = p.space.n;
    const double h = p.space.h();
    std::vector<std::complex<double>> z;
    z.reserve(p.time.nodes() * n);
    for (std::size_t k = 0; k < p.time.nodes(); ++k) {
        const double* r = p.row(k);
        for (std::size_t j = 0; j < n; ++j) {
            const double s = std::sqrt(std::max(r[j + 1] - r[j], 0.0) / h);
            const double th = 0.5 * (r[j] + r[j + 1]);
            z.push_back(std::polar(s, th));
        }
    }
    return z;
}

/// Flat energy of the square-root lift: quadrature of |dt z|^2 with
/// |dt z|^2 = (dt s)^2 + (mean s)^2 (dt theta)^2 on the shared cell stencils.
/// Equals lagrangian_energy(p).total() to rounding.
inline double sqrt_lift_energy(const PathGrid& p) {
    const std::size_t n = p.space.n, m = p.time.m;
    const double h = p.space.h(), dt = p.time.dt();
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = detail::cell_stencil(p, k, j);
            const double dts = (c.s_hi - c.s_lo) / dt;
            const double sb = 0.5 * (c.s_lo + c.s_hi);
            acc += (dts * dts + sb * sb * c.dt_phi * c.dt_phi) * h * dt;
        }
    }
    return acc;
}

/// Minimal value of int_a^b v^2 + (v')^2 over H^1 interpolants with v(a) = vm,
/// v(b) = vp. Closed form (vm^2+vp^2) coth(L) - 2 vm vp / sinh(L), L = b - a,
/// rearranged as (vm-vp)^2 coth(L) + 2 vm vp tanh(L/2): both terms are stable
/// for small and large L and the symmetry in (vm, vp) is exact.
inline double e_sh_closed(double vm, double vp, double a, double b) {
    const double L = b - a;
    if (!(L > 0.0)) throw DomainError("e_sh_closed: requires b > a");
    const double d2 = (vm - vp) * (vm - vp);
    const double t1 = (d2 == 0.0) ? 0.0 : d2 / std::tanh(L);
    return t1 + 2.0 * vm * vp * std::tanh(0.5 * L);
}

/// Which printed form of the jump cost to evaluate. closed_form is the sinh
/// minimizer value and is authoritative; as_printed keeps the extra leading
/// gap factors of the corollary text for side-by-side comparison.
enum class JumpFormula { closed_form, as_printed };

/// Time quadrature (trapezoid) of the summed jump costs. Nodes with a closed
/// gap contribute zero; an open gap is priced by e_sh_closed on the stored
/// limit velocities.
inline double jump_energy(const std::vector<JumpRecord>& jumps, const TimeGrid& time,
                          JumpFormula formula = JumpFormula::closed_form) {
    const double dt = time.dt();
    double acc = 0.0;
    for (std::size_t k = 0; k <= time.m; ++k) {
        double node = 0.0;
        for (const auto& J : jumps) {
            require_same(J.time, time, "jump_energy");
            const double L = J.gap(k);
            if (!(L > 0.0)) continue;
            const double e = e_sh_closed(J.lo_vel[k], J.hi_vel[k], J.lo[k], J.hi[k]);
            node += (formula == JumpFormula::closed_form) ? e : L * e;
        }
        acc += trap_weight(k, time.m) * node;
    }
    return acc * dt;
}

/// Energy of a relaxed path: action of the continuous part plus the jump term.
inline EnergyBreakdown relaxed_energy(const PathGrid& continuous_part,
                                      const std::vector<JumpRecord>& jumps,
                                      const FisherRaoOptions& opt = {},
                                      JumpFormula formula = JumpFormula::closed_form) {
    EnergyBreakdown e = lagrangian_energy(continuous_part, opt);
    e.jump = jump_energy(jumps, continuous_part.time, formula);
    return e;
}

} // namespace mongeo
