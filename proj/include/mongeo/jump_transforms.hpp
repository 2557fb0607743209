#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mongeo/errors.hpp"
#include "mongeo/grid.hpp"

namespace mongeo {

/// Jump locations and widths for the domain-widening map F. Locations strictly
/// increasing in (0,1), widths positive; total_width is their sum.
struct JumpSpec {
    std::vector<double> locations;
    std::vector<double> widths;

    JumpSpec() = default;
    JumpSpec(std::vector<double> locs, std::vector<double> w)
        : locations(std::move(locs)), widths(std::move(w)) {
        if (locations.size() != widths.size())
            throw GridMismatch("JumpSpec: locations/widths size mismatch");
        double prev = 0.0;
        for (std::size_t i = 0; i < locations.size(); ++i) {
            if (!(locations[i] > prev && locations[i] < 1.0))
                throw DomainError("JumpSpec: locations must be strictly increasing in (0,1)");
            if (!(widths[i] > 0.0)) throw DomainError("JumpSpec: widths must be positive");
            prev = locations[i];
        }
    }

    double total_width() const {
        return std::accumulate(widths.begin(), widths.end(), 0.0);
    }

    /// F(x_i), the lower edge of gap i in the widened coordinate.
    double gap_lower(std::size_t i) const {
        double c = 0.0;
        for (std::size_t l = 0; l < i; ++l) c += widths[l];
        return locations[i] + c;
    }
};

/// F(x) = x + sum of widths at locations strictly below x. Maps [0,1] into
/// [0, 1 + total_width], jumping by widths[i] across each location.
inline double jump_function_F(const JumpSpec& spec, double x) {
    double s = x;
    for (std::size_t i = 0; i < spec.locations.size(); ++i)
        if (spec.locations[i] < x) s += spec.widths[i];
    return s;
}

/// G(y) = inf{x : F(x) >= y}: the 1-Lipschitz left inverse, constant on the
/// gap (F(x_i), F(x_i) + width_i]. G(F(x)) = x for every x.
inline double stairs_function_G(const JumpSpec& spec, double y) {
    double s = y;
    for (std::size_t i = 0; i < spec.locations.size(); ++i) {
        const double lo = spec.gap_lower(i);
        if (y > lo) s -= std::min(spec.widths[i], y - lo);
    }
    return s;
}

/// Pushforward audit of the measure f * Lebesgue under F. Source cells are cut
/// at jump locations and deposited (midpoint mass) into target cells of the
/// same width covering [0, 1 + total_width]; the reference side integrates
/// f(G(y)) over each target cell with the gap set removed. Gap cells must end
/// up empty on both sides and total mass must be preserved.
struct PushforwardReport {
    double max_cell_discrepancy = 0.0;
    double total_mass_source = 0.0;
    double total_mass_pushforward = 0.0;
    double max_gap_cell_mass = 0.0;
};

inline PushforwardReport pushforward_check(const JumpSpec& spec, const SpaceGrid& grid,
                                           const std::vector<double>& f_nodes) {
    if (f_nodes.size() != grid.nodes())
        throw GridMismatch("pushforward_check: sample count does not match grid");
    const double h = grid.h();
    const double width = 1.0 + spec.total_width();
    const auto n_t = static_cast<std::size_t>(std::ceil(width / h - 1e-12));
    auto f_at = [&](double x) {
        x = std::min(1.0, std::max(0.0, x));
        const double p = x * static_cast<double>(grid.n);
        const auto j = std::min(static_cast<std::size_t>(p), grid.n - 1);
        const double lam = p - static_cast<double>(j);
        return (1.0 - lam) * f_nodes[j] + lam * f_nodes[j + 1];
    };

    PushforwardReport rep;
    std::vector<double> push(n_t, 0.0);

    // side A: cut each source cell at interior jump locations, map each piece by
    // the local shift, deposit its midpoint mass into overlapped target cells
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double a = grid.node(j), b = grid.node(j + 1);
        std::vector<double> cuts{a};
        for (double xl : spec.locations)
            if (xl > a && xl < b) cuts.push_back(xl);
        cuts.push_back(b);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double lo = cuts[c], hi = cuts[c + 1];
            const double mass = (hi - lo) * f_at(0.5 * (lo + hi));
            rep.total_mass_source += mass;
            // F is affine on the piece; use the midpoint's shift for both ends
            const double shift = jump_function_F(spec, 0.5 * (lo + hi)) - 0.5 * (lo + hi);
            const double ylo = lo + shift, yhi = hi + shift;
            // spread uniformly over [ylo, yhi]
            const auto j0 = std::min(static_cast<std::size_t>(std::max(0.0, ylo / h)), n_t - 1);
            for (std::size_t tj = j0; tj < n_t; ++tj) {
                const double ta = h * static_cast<double>(tj);
                if (ta >= yhi) break;
                const double tb = std::min(width, ta + h);
                const double ov = std::min(yhi, tb) - std::max(ylo, ta);
                if (ov > 0.0) push[tj] += mass * ov / (yhi - ylo);
            }
        }
    }

    // side B: integrate f(G(y)) over each target cell minus the gap set, and
    // record the pushforward mass any fully-in-gap cell carries
    for (std::size_t tj = 0; tj < n_t; ++tj) {
        const double ta = h * static_cast<double>(tj);
        const double tb = std::min(width, ta + h);
        std::vector<std::pair<double, double>> pieces{{ta, tb}};
        bool fully_gap = false;
        for (std::size_t i = 0; i < spec.locations.size(); ++i) {
            const double glo = spec.gap_lower(i), ghi = glo + spec.widths[i];
            if (ta >= glo && tb <= ghi) fully_gap = true;
            std::vector<std::pair<double, double>> next;
            for (auto [plo, phi] : pieces) {
                const double clo = std::max(plo, glo), chi = std::min(phi, ghi);
                if (clo < chi) {
                    if (plo < clo) next.emplace_back(plo, clo);
                    if (chi < phi) next.emplace_back(chi, phi);
                } else {
                    next.emplace_back(plo, phi);
                }
            }
            pieces = std::move(next);
        }
        double ref = 0.0;
        for (auto [plo, phi] : pieces)
            ref += (phi - plo) * f_at(stairs_function_G(spec, 0.5 * (plo + phi)));
        rep.max_cell_discrepancy = std::max(rep.max_cell_discrepancy, std::abs(push[tj] - ref));
        if (fully_gap) rep.max_gap_cell_mass = std::max(rep.max_gap_cell_mass, std::abs(push[tj]));
        rep.total_mass_pushforward += push[tj];
    }
    return rep;
}

} // namespace mongeo
