#pragma once

#include <cmath>
#include <vector>

#include "mongeo/energy.hpp"
#include "mongeo/errors.hpp"
#include "mongeo/monotone_map.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

/// Squared Hellinger distance between the increment measures of two maps on a
/// common grid: sum over cells of (sqrt(d1) - sqrt(d0))^2.
inline double hellinger_distance_sq(const MonotoneMap& from, const MonotoneMap& to) {
    require_same(from.grid, to.grid, "hellinger_distance_sq");
    double acc = 0.0;
    for (std::size_t j = 0; j < from.grid.n; ++j) {
        const double d0 = from.values[j + 1] - from.values[j];
        const double d1 = to.values[j + 1] - to.values[j];
        const double d = std::sqrt(d1) - std::sqrt(d0);
        acc += d * d;
    }
    return acc;
}

/// Geodesic of the square roots of the increments: per cell interpolate
/// f = t sqrt(d1) + (1-t) sqrt(d0), renormalize so each slice carries unit
/// mass (the norm of f is exactly 1 - t(1-t) d^2), and accumulate. Slices are
/// exact monotone maps by construction.
inline PathGrid hellinger_path(const MonotoneMap& from, const MonotoneMap& to,
                               const TimeGrid& time) {
    require_same(from.grid, to.grid, "hellinger_path");
    const std::size_t n = from.grid.n;
    const std::size_t m = time.m;
    const double dsq = hellinger_distance_sq(from, to);

    std::vector<double> s0(n), s1(n);
    for (std::size_t j = 0; j < n; ++j) {
        s0[j] = std::sqrt(from.values[j + 1] - from.values[j]);
        s1[j] = std::sqrt(to.values[j + 1] - to.values[j]);
    }

    std::vector<double> vals((m + 1) * (n + 1));
    for (std::size_t k = 0; k <= m; ++k) {
        const double t = time.node(k) / time.T; // path parameter on [0,1]
        const double norm = 1.0 - t * (1.0 - t) * dsq;
        double* row = vals.data() + k * (n + 1);
        row[0] = 0.0;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double f = s0[j] + t * (s1[j] - s0[j]); // == s0 exactly when endpoints agree
            acc += f * f / norm;
            row[j + 1] = acc;
        }
        row[n] = 1.0;
    }
    return PathGrid(from.grid, time, std::move(vals));
}

inline constexpr double kHellingerBoundFactor = 144.0;

struct HellingerReport {
    double d_squared = 0.0;
    EnergyBreakdown energy; // action of the interpolating path
    double bound = 0.0;     // a priori cap: 144 * d_squared
    PathGrid path;

    bool within_bound() const { return energy.total() <= bound; }
};

/// Distance, comparison path, and its action in one call. The action of the
/// renormalized square-root line is controlled by a fixed multiple of the
/// squared Hellinger distance, which turns the distance into a two-sided
/// modulus for the geodesic metric.
inline HellingerReport hellinger_report(const MonotoneMap& from, const MonotoneMap& to,
                                        const TimeGrid& time,
                                        const FisherRaoOptions& opt = FisherRaoOptions::strict()) {
    HellingerReport rep;
    rep.d_squared = hellinger_distance_sq(from, to);
    rep.path = hellinger_path(from, to, time);
    rep.energy = lagrangian_energy(rep.path, opt);
    rep.bound = kHellingerBoundFactor * rep.d_squared;
    return rep;
}

inline HellingerReport hellinger_report(const MonotoneMap& from, const MonotoneMap& to,
                                        std::size_t steps) {
    return hellinger_report(from, to, TimeGrid{steps, 1.0});
}

} // namespace mongeo
