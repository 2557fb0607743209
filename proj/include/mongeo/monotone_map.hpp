#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mongeo/errors.hpp"
#include "mongeo/grid.hpp"
#include "mongeo/numerics.hpp"

namespace mongeo {

inline constexpr double kBoundaryTol = 1e-12;

/// Clean nodal values of a nondecreasing [0,1] -> [0,1] map:
///   - endpoints must sit on 0 and 1 within kBoundaryTol, then snap exactly;
///   - increments below -kBoundaryTol are hard errors, tiny negatives clamp to 0.
/// Returns the cleaned values.
inline std::vector<double> validate_monotone(std::vector<double> values) {
    const std::size_t n = values.size() - 1;
    if (values.size() < 2) throw DomainError("validate_monotone: need at least two nodes");
    if (std::abs(values.front()) > kBoundaryTol)
        throw BoundaryViolation("validate_monotone: value at x=0 is " +
                                std::to_string(values.front()));
    if (std::abs(values.back() - 1.0) > kBoundaryTol)
        throw BoundaryViolation("validate_monotone: value at x=1 is " +
                                std::to_string(values.back()));
    for (std::size_t j = 0; j < n; ++j) {
        const double inc = values[j + 1] - values[j];
        if (inc < -kBoundaryTol)
            throw MonotonicityViolation("validate_monotone: decreasing increment " +
                                        std::to_string(inc) + " at cell " + std::to_string(j));
    }
    values[0] = 0.0;
    values[n] = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j)
        values[j + 1] = std::min(1.0, std::max(values[j + 1], values[j]));
    if (values[n - 1] > 1.0) values[n - 1] = 1.0;
    return values;
}

/// Nondecreasing map of [0,1] with phi(0)=0, phi(1)=1, nodal values on a SpaceGrid,
/// piecewise-linear in between.
struct MonotoneMap {
    SpaceGrid grid;
    std::vector<double> values; // n+1 nodal values

    MonotoneMap() = default;
    MonotoneMap(SpaceGrid g, std::vector<double> vals) : grid(g), values(std::move(vals)) {
        if (values.size() != grid.nodes())
            throw GridMismatch("MonotoneMap: value count does not match grid");
        values = validate_monotone(std::move(values));
    }

    static MonotoneMap identity(SpaceGrid g) {
        std::vector<double> v(g.nodes());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = g.node(j);
        return MonotoneMap(g, std::move(v));
    }

    /// Build from nonnegative cell masses (normalized to total 1).
    static MonotoneMap from_increments(SpaceGrid g, const std::vector<double>& inc) {
        if (inc.size() != g.n) throw GridMismatch("from_increments: cell count mismatch");
        double total = 0.0;
        for (double d : inc) {
            if (d < 0.0) throw MonotonicityViolation("from_increments: negative mass");
            total += d;
        }
        if (total <= 0.0) throw DomainError("from_increments: zero total mass");
        std::vector<double> v(g.nodes(), 0.0);
        for (std::size_t j = 0; j < g.n; ++j) v[j + 1] = v[j] + inc[j] / total;
        v[g.n] = 1.0;
        return MonotoneMap(g, std::move(v));
    }
};

/// Piecewise-linear evaluation; x must lie in [0,1].
inline double eval_map(const MonotoneMap& phi, double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("eval_map: argument " + std::to_string(x) + " outside [0,1]");
    return lerp_unit_grid(phi.values, x);
}

/// Generalized inverse psi(y) = inf{x : phi(x) >= y}, sampled on out_grid.
/// Left-continuous inf convention: flat runs of phi invert to their left edge.
/// Endpoints are pinned to 0 and 1 so the result stays in the class; on strictly
/// increasing maps the pin agrees with the inf.
inline MonotoneMap generalized_inverse(const MonotoneMap& phi, SpaceGrid out_grid) {
    const auto& v = phi.values;
    const std::size_t n = phi.grid.n;
    std::vector<double> psi(out_grid.nodes());
    psi.front() = 0.0;
    psi.back() = 1.0;
    std::size_t j = 0; // first node with v[j] >= y; y scans upward, so j only advances
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const double y = out_grid.node(i);
        while (j <= n && v[j] < y) ++j;
        if (j == 0) {
            psi[i] = 0.0;
        } else if (j > n) {
            psi[i] = 1.0; // y above reachable values only by rounding; clamp
        } else {
            const double lo = v[j - 1], hi = v[j];
            const double x0 = phi.grid.node(j - 1);
            psi[i] = x0 + phi.grid.h() * (y - lo) / (hi - lo); // hi > lo since lo < y <= hi
        }
    }
    return MonotoneMap(out_grid, std::move(psi));
}

/// Composition (a after b): x -> a(b(x)), sampled on b's grid.
inline MonotoneMap compose(const MonotoneMap& a, const MonotoneMap& b) {
    std::vector<double> v(b.grid.nodes());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = eval_map(a, b.values[j]);
    return MonotoneMap(b.grid, std::move(v));
}

} // namespace mongeo
