#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mongeo/errors.hpp"
#include "mongeo/monotone_map.hpp"
#include "mongeo/numerics.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

/// Advect phi0 by a time-dependent field (t, y) -> velocity, classical RK4 per
/// node with fixed step dt. field(k, frac, y) evaluates at time t_k + frac*dt.
/// Slices are re-validated after every step: violations beyond kFlowGuard
/// reject the step (refine the time grid), smaller ones are clamped.
inline constexpr double kFlowGuard = 1e-8;

namespace detail {

using FieldFn = std::function<double(std::size_t, double, double)>;

inline PathGrid integrate_flow_impl(const FieldFn& field, const MonotoneMap& phi0,
                                    const TimeGrid& time) {
    const std::size_t n = phi0.grid.n, m = time.m;
    const double dt = time.dt();
    std::vector<double> vals;
    vals.reserve((n + 1) * (m + 1));
    std::vector<double> y = phi0.values;
    vals.insert(vals.end(), y.begin(), y.end());
    auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 1; j < n; ++j) {
            const double y0 = y[j];
            const double k1 = field(k, 0.0, y0);
            const double k2 = field(k, 0.5, clamp01(y0 + 0.5 * dt * k1));
            const double k3 = field(k, 0.5, clamp01(y0 + 0.5 * dt * k2));
            const double k4 = field(k, 1.0, clamp01(y0 + dt * k3));
            y[j] = clamp01(y0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        }
        // boundary characteristics are stationary (v vanishes there)
        y[0] = 0.0;
        y[n] = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double inc = y[j + 1] - y[j];
            if (inc < -kFlowGuard)
                throw StepRejected("integrate_flow: crossing characteristics at step " +
                                   std::to_string(k) + ", cell " + std::to_string(j) +
                                   " (refine m)");
            if (inc < 0.0) y[j + 1] = y[j];
        }
        vals.insert(vals.end(), y.begin(), y.end());
    }
    return PathGrid(phi0.grid, time, std::move(vals));
}

} // namespace detail

/// Flow of a gridded velocity field (bilinear interpolation in t and x).
inline PathGrid integrate_flow(const VelocityField& v, const MonotoneMap& phi0) {
    require_same(v.space, phi0.grid, "integrate_flow");
    return detail::integrate_flow_impl(
        [&v](std::size_t k, double frac, double y) { return v.eval(k, frac, y); }, phi0,
        v.time);
}

/// Flow of a closed-form field (t, y) -> velocity.
inline PathGrid integrate_flow(const std::function<double(double, double)>& field,
                               const MonotoneMap& phi0, const TimeGrid& time) {
    const double dt = time.dt();
    return detail::integrate_flow_impl(
        [&field, &time, dt](std::size_t k, double frac, double y) {
            return field(time.node(k) + frac * dt, y);
        },
        phi0, time);
}

/// Max over steps and nodes of |Phi_{k+1,j} - Phi_{k,j} - dt * v(t_mid, phi_mid)|,
/// the midpoint-quadrature defect of the flow constraint. Third order per step
/// on integrator output; an O(1) nodal perturbation shows up at full size.
inline double flow_residual(const PathGrid& p, const VelocityField& v) {
    require_same(p.space, v.space, "flow_residual");
    require_same(p.time, v.time, "flow_residual");
    const double dt = p.time.dt();
    double worst = 0.0;
    for (std::size_t k = 0; k < p.time.m; ++k)
        for (std::size_t j = 0; j <= p.space.n; ++j) {
            const double mid = 0.5 * (p.at(k, j) + p.at(k + 1, j));
            const double r =
                p.at(k + 1, j) - p.at(k, j) - dt * v.eval(k, 0.5, std::min(1.0, std::max(0.0, mid)));
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

/// Autonomous non-Lipschitz profiles whose flows lose forward/backward
/// uniqueness at the critical point.
enum class CollapseKind {
    to_half,        // sgn(1/2 - x) |x - 1/2|^{1/3}: all interior mass reaches 1/2
    from_boundary,  // -x |x - 1|^{1/3}: mass may stay at 1 or detach along the envelope
};

struct CollapseField {
    CollapseKind kind;

    double operator()(double x) const {
        if (kind == CollapseKind::to_half) {
            const double g = x - 0.5;
            const double mag = std::cbrt(std::abs(g));
            return (g < 0.0) ? mag : (g > 0.0 ? -mag : 0.0);
        }
        return -x * std::cbrt(std::abs(x - 1.0));
    }

    /// Sampled profile. to_half does not vanish at x = 0, so the outermost
    /// nodes are zeroed to honor the boundary condition; the taper lives in
    /// the first and last cell only.
    std::vector<double> sample(const SpaceGrid& g) const {
        std::vector<double> p(g.nodes());
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = (*this)(g.node(j));
        p.front() = 0.0;
        p.back() = 0.0;
        return p;
    }

    /// Departure envelope of the from_boundary flow at the critical point
    /// x = 1: y(t) = 1 - (2t/3)^{3/2}; y == 1 is the other solution.
    static double boundary_envelope(double t) {
        return 1.0 - std::pow(2.0 * t / 3.0, 1.5);
    }

    /// Exact arrival time at 1/2 of the to_half flow started at x.
    static double arrival_time(double x) {
        return 1.5 * std::pow(std::abs(x - 0.5), 2.0 / 3.0);
    }
};

inline CollapseField collapse_field(CollapseKind kind) { return CollapseField{kind}; }

/// Worst ratio |phi(t,x) - phi(s,x)| / (2 sqrt(E) sqrt(t-s)) over all node pairs.
/// For any path of energy E the true ratio is <= 1 (Cauchy-Schwarz through the
/// quarter-weighted derivative term); ratios above 1 flag an inconsistent
/// (path, energy) claim.
struct HolderReport {
    double worst_ratio = 0.0;
    std::size_t arg_k = 0, arg_l = 0, arg_j = 0;
    bool ok() const { return worst_ratio <= 1.0; }
};

inline HolderReport holder_bound_check(const PathGrid& p, double energy) {
    HolderReport rep;
    if (!(energy > 0.0)) throw DomainError("holder_bound_check: need positive energy");
    const double c = 2.0 * std::sqrt(energy);
    const double dt = p.time.dt();
    for (std::size_t k = 0; k < p.time.nodes(); ++k)
        for (std::size_t l = k + 1; l < p.time.nodes(); ++l) {
            const double denom = c * std::sqrt(static_cast<double>(l - k) * dt);
            for (std::size_t j = 0; j <= p.space.n; ++j) {
                const double ratio = std::abs(p.at(l, j) - p.at(k, j)) / denom;
                if (ratio > rep.worst_ratio) {
                    rep.worst_ratio = ratio;
                    rep.arg_k = k;
                    rep.arg_l = l;
                    rep.arg_j = j;
                }
            }
        }
    return rep;
}

} // namespace mongeo
