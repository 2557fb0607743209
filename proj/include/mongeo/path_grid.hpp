#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mongeo/errors.hpp"
#include "mongeo/grid.hpp"
#include "mongeo/monotone_map.hpp"

namespace mongeo {

/// Boundary policy for path slices. `unit_range` is the standard class
/// (phi(t,1) = 1). `free_upper` admits slices ending below 1; it carries the
/// continuous part of a path with jumps, whose range is 1 minus the total gap.
enum class SliceBounds { unit_range, free_upper };

/// Time-indexed family of monotone maps on a common space grid, row k = slice
/// at time t_k. Values are stored row-major, (m+1) x (n+1).
struct PathGrid {
    SpaceGrid space;
    TimeGrid time;
    std::vector<double> values;
    SliceBounds bounds = SliceBounds::unit_range;

    PathGrid() = default;

    PathGrid(SpaceGrid s, TimeGrid t, std::vector<double> vals,
             SliceBounds b = SliceBounds::unit_range)
        : space(s), time(t), values(std::move(vals)), bounds(b) {
        if (values.size() != space.nodes() * time.nodes())
            throw GridMismatch("PathGrid: value count does not match grids");
        validate_all_slices();
    }

    /// Constant-in-time path from one map.
    static PathGrid constant(const MonotoneMap& phi, TimeGrid t) {
        std::vector<double> v;
        v.reserve(phi.values.size() * t.nodes());
        for (std::size_t k = 0; k < t.nodes(); ++k)
            v.insert(v.end(), phi.values.begin(), phi.values.end());
        return PathGrid(phi.grid, t, std::move(v));
    }

    double& at(std::size_t k, std::size_t j) { return values[k * space.nodes() + j]; }
    double at(std::size_t k, std::size_t j) const { return values[k * space.nodes() + j]; }
    const double* row(std::size_t k) const { return values.data() + k * space.nodes(); }
    double* row(std::size_t k) { return values.data() + k * space.nodes(); }

    std::vector<double> slice_values(std::size_t k) const {
        return std::vector<double>(row(k), row(k) + space.nodes());
    }

    MonotoneMap slice(std::size_t k) const { return MonotoneMap(space, slice_values(k)); }

    /// Validate one row in place: boundary snap plus increment clamp, following
    /// the MonotoneMap rules (upper end exempted under free_upper).
    void validate_slice(std::size_t k) {
        double* r = row(k);
        const std::size_t n = space.n;
        if (std::abs(r[0]) > kBoundaryTol)
            throw BoundaryViolation("PathGrid: slice " + std::to_string(k) +
                                    " starts at " + std::to_string(r[0]));
        const bool pin_top = (bounds == SliceBounds::unit_range);
        if (pin_top && std::abs(r[n] - 1.0) > kBoundaryTol)
            throw BoundaryViolation("PathGrid: slice " + std::to_string(k) +
                                    " ends at " + std::to_string(r[n]));
        for (std::size_t j = 0; j < n; ++j)
            if (r[j + 1] - r[j] < -kBoundaryTol)
                throw MonotonicityViolation("PathGrid: slice " + std::to_string(k) +
                                            " decreases at cell " + std::to_string(j));
        r[0] = 0.0;
        if (pin_top) r[n] = 1.0;
        const double top = pin_top ? 1.0 : r[n];
        for (std::size_t j = 0; j + 1 < n; ++j)
            r[j + 1] = std::min(top, std::max(r[j + 1], r[j]));
        if (n >= 1 && r[n] < r[n - 1]) {
            if (r[n - 1] - r[n] > kBoundaryTol)
                throw MonotonicityViolation("PathGrid: slice " + std::to_string(k) +
                                            " decreases at the last cell");
            r[n - 1] = r[n];
        }
    }

    void validate_all_slices() {
        for (std::size_t k = 0; k < time.nodes(); ++k) validate_slice(k);
    }
};

/// Time-indexed velocity field on a common grid, v(t_k, x_j) with
/// v(t,0) = v(t,1) = 0 (tangent space at the boundary-fixing class).
struct VelocityField {
    SpaceGrid space;
    TimeGrid time;
    std::vector<double> values; // (m+1) x (n+1), row-major

    VelocityField() = default;

    VelocityField(SpaceGrid s, TimeGrid t, std::vector<double> vals)
        : space(s), time(t), values(std::move(vals)) {
        if (values.size() != space.nodes() * time.nodes())
            throw GridMismatch("VelocityField: value count does not match grids");
        for (std::size_t k = 0; k < time.nodes(); ++k) {
            if (std::abs(at(k, 0)) > kBoundaryTol || std::abs(at(k, space.n)) > kBoundaryTol)
                throw BoundaryViolation("VelocityField: nonzero boundary value at slice " +
                                        std::to_string(k));
            values[k * space.nodes()] = 0.0;
            values[k * space.nodes() + space.n] = 0.0;
        }
    }

    /// Autonomous field from one profile.
    static VelocityField autonomous(SpaceGrid s, TimeGrid t, const std::vector<double>& profile) {
        std::vector<double> v;
        v.reserve(profile.size() * t.nodes());
        for (std::size_t k = 0; k < t.nodes(); ++k)
            v.insert(v.end(), profile.begin(), profile.end());
        return VelocityField(s, t, std::move(v));
    }

    double& at(std::size_t k, std::size_t j) { return values[k * space.nodes() + j]; }
    double at(std::size_t k, std::size_t j) const { return values[k * space.nodes() + j]; }
    const double* row(std::size_t k) const { return values.data() + k * space.nodes(); }

    std::vector<double> slice_values(std::size_t k) const {
        return std::vector<double>(row(k), row(k) + space.nodes());
    }

    /// Bilinear evaluation: linear in x on the slice grid, linear in t between
    /// slices k and k+1 at fraction frac in [0,1].
    double eval(std::size_t k, double frac, double y) const {
        const std::size_t kk = (k >= time.m) ? time.m : k;
        const std::size_t k2 = (kk + 1 > time.m) ? time.m : kk + 1;
        const double n = static_cast<double>(space.n);
        double p = y * n;
        if (p < 0.0) p = 0.0;
        if (p > n) p = n;
        const auto j = static_cast<std::size_t>(p >= n ? n - 1.0 : p);
        const double lam = p - static_cast<double>(j);
        const double lo = (1.0 - lam) * at(kk, j) + lam * at(kk, j + 1);
        const double hi = (1.0 - lam) * at(k2, j) + lam * at(k2, j + 1);
        return (1.0 - frac) * lo + frac * hi;
    }
};

} // namespace mongeo
