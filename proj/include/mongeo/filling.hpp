#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mongeo/energy.hpp"
#include "mongeo/errors.hpp"
#include "mongeo/jump_record.hpp"
#include "mongeo/jump_transforms.hpp"
#include "mongeo/numerics.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

inline constexpr double kGapCollapseTol = 1e-12;

/// Minimal-norm interpolant of the boundary velocities across an open gap:
/// v(y) = vp sinh(y-a)/sinh(L) + vm sinh(b-y)/sinh(L). Falls back to the
/// linear blend when the gap is too narrow for the sinh ratios.
inline double sinh_interpolant(double vm, double vp, double a, double b, double y) {
    const double L = b - a;
    if (L < kGapCollapseTol) return 0.5 * (vm + vp);
    if (L < 1e-6) { // sinh(x)/sinh(L) -> x/L to rounding
        const double w = (y - a) / L;
        return vp * w + vm * (1.0 - w);
    }
    const double s = std::sinh(L);
    return vp * std::sinh(y - a) / s + vm * std::sinh(b - y) / s;
}

/// Interior of one gap over time: particle positions in absolute coordinates,
/// rows = time nodes, columns = n_loc+1 local particles including both edges.
/// collapsed[k] marks times where the gap is shut and the interior is pinned.
struct GapFill {
    TimeGrid time;
    std::size_t n_loc = 0;
    std::vector<double> positions; // (m+1) x (n_loc+1)
    std::vector<char> collapsed;   // m+1

    double at(std::size_t k, std::size_t i) const { return positions[k * (n_loc + 1) + i]; }
    double& at(std::size_t k, std::size_t i) { return positions[k * (n_loc + 1) + i]; }
};

/// Fill one gap with the flow of the sinh interpolant between the limit curves.
/// Particles are seeded affinely at t = 0 when the gap is open there; each
/// later maximal open interval is seeded affinely at its midpoint node and
/// integrated in both time directions. Closed times pin the interior to the
/// common value (GapCollapse is a signal, not an error). Boundary rows always
/// reproduce lo/hi exactly; interior particles stay ordered between them.
inline GapFill fill_between(const TimeGrid& time, const std::vector<double>& lo,
                            const std::vector<double>& hi, const std::vector<double>& lo_vel,
                            const std::vector<double>& hi_vel, std::size_t n_loc) {
    const std::size_t m = time.m;
    if (lo.size() != m + 1 || hi.size() != m + 1 || lo_vel.size() != m + 1 ||
        hi_vel.size() != m + 1)
        throw GridMismatch("fill_between: curve length does not match time grid");
    if (n_loc < 1) throw DomainError("fill_between: need at least one interior cell");
    for (std::size_t k = 0; k <= m; ++k)
        if (hi[k] - lo[k] < -kGapCollapseTol)
            throw MonotonicityViolation("fill_between: hi < lo at node " + std::to_string(k));

    GapFill fill;
    fill.time = time;
    fill.n_loc = n_loc;
    fill.positions.assign((m + 1) * (n_loc + 1), 0.0);
    fill.collapsed.assign(m + 1, 0);

    const double dt = time.dt();
    auto open = [&](std::size_t k) { return hi[k] - lo[k] >= kGapCollapseTol; };

    // time-interpolated field data for the RK4 stages
    auto curve = [&](const std::vector<double>& f, std::size_t k, double frac) {
        const std::size_t k2 = std::min(k + 1, m);
        return (1.0 - frac) * f[k] + frac * f[k2];
    };
    auto velocity = [&](std::size_t k, double frac, double y) {
        return sinh_interpolant(curve(lo_vel, k, frac), curve(hi_vel, k, frac),
                                curve(lo, k, frac), curve(hi, k, frac), y);
    };

    auto seed_affine = [&](std::size_t k, std::vector<double>& y) {
        for (std::size_t i = 0; i <= n_loc; ++i) {
            const double xi = static_cast<double>(i) / static_cast<double>(n_loc);
            y[i] = (1.0 - xi) * lo[k] + xi * hi[k];
        }
    };
    auto write_row = [&](std::size_t k, const std::vector<double>& y) {
        for (std::size_t i = 0; i <= n_loc; ++i) fill.at(k, i) = y[i];
        fill.at(k, 0) = lo[k];
        fill.at(k, n_loc) = hi[k];
    };
    auto clamp_row = [&](std::size_t k) {
        // keep interior particles ordered inside [lo, hi] against rounding
        for (std::size_t i = 1; i <= n_loc; ++i)
            fill.at(k, i) = std::max(fill.at(k, i), fill.at(k, i - 1));
        for (std::size_t i = n_loc; i-- > 1;)
            fill.at(k, i) = std::min(fill.at(k, i), fill.at(k, i + 1));
    };
    auto rk4_step = [&](std::size_t k, bool forward, std::vector<double>& y) {
        const double sdt = forward ? dt : -dt;
        const std::size_t base = forward ? k : k - 1;
        const double f0 = forward ? 0.0 : 1.0;
        const double fm = 0.5;
        const double f1 = forward ? 1.0 : 0.0;
        for (std::size_t i = 1; i < n_loc; ++i) {
            const double y0 = y[i];
            const double k1 = velocity(base, f0, y0);
            const double k2 = velocity(base, fm, y0 + 0.5 * sdt * k1);
            const double k3 = velocity(base, fm, y0 + 0.5 * sdt * k2);
            const double k4 = velocity(base, f1, y0 + sdt * k3);
            y[i] = y0 + sdt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const std::size_t kt = forward ? k + 1 : k - 1;
        y[0] = lo[kt];
        y[n_loc] = hi[kt];
    };

    std::vector<double> y(n_loc + 1);
    std::size_t k = 0;
    while (k <= m) {
        if (!open(k)) {
            const double c = 0.5 * (lo[k] + hi[k]);
            for (std::size_t i = 0; i <= n_loc; ++i) fill.at(k, i) = c;
            fill.at(k, 0) = lo[k];
            fill.at(k, n_loc) = hi[k];
            fill.collapsed[k] = 1;
            ++k;
            continue;
        }
        // maximal open interval [k, last]
        std::size_t last = k;
        while (last < m && open(last + 1)) ++last;
        const std::size_t seed = (k == 0) ? 0 : (k + last) / 2;
        seed_affine(seed, y);
        write_row(seed, y);
        clamp_row(seed);
        auto run = [&](bool forward) {
            std::vector<double> yy(fill.positions.begin() + seed * (n_loc + 1),
                                   fill.positions.begin() + (seed + 1) * (n_loc + 1));
            std::size_t kk = seed;
            while (forward ? kk < last : kk > k) {
                rk4_step(kk, forward, yy);
                kk = forward ? kk + 1 : kk - 1;
                write_row(kk, yy);
                clamp_row(kk);
            }
        };
        run(true);
        run(false);
        k = last + 1;
    }
    return fill;
}

/// Proportional gap widths: width_i = eps * max_gap_i / sum(max_gap).
inline std::vector<double> proportional_widths(const std::vector<JumpRecord>& jumps,
                                               double eps) {
    std::vector<double> w(jumps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        w[i] = jumps[i].max_gap();
        total += w[i];
    }
    if (total <= 0.0) throw DomainError("proportional_widths: all gaps are closed");
    for (auto& x : w) x *= eps / total;
    return w;
}

/// Replace the declared jumps of a relaxed path by sinh-flow ramps: widen the
/// domain by eps via jump_function_F, fill each gap with fill_between, and
/// rescale back to [0,1] (the affine label change leaves the action invariant).
/// The continuous part must splice with the jump limits: at each time node,
/// continuous(x_i) + sum of lower gaps = lo_i within splice_tol.
inline PathGrid fill_jumps(const PathGrid& continuous_part,
                           const std::vector<JumpRecord>& jumps, double eps,
                           std::size_t n_out, double splice_tol = 1e-6) {
    if (jumps.empty()) {
        PathGrid out = continuous_part;
        out.bounds = SliceBounds::unit_range;
        out.validate_all_slices();
        return out;
    }
    if (!(eps > 0.0)) throw DomainError("fill_jumps: eps must be positive");
    const TimeGrid& time = continuous_part.time;
    const std::size_t m = time.m;

    std::vector<double> locs(jumps.size());
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        require_same(jumps[i].time, time, "fill_jumps");
        locs[i] = jumps[i].location;
    }
    for (std::size_t i = 1; i < locs.size(); ++i)
        if (!(locs[i] > locs[i - 1]))
            throw DomainError("fill_jumps: jump locations must be strictly increasing");
    JumpSpec spec(locs, proportional_widths(jumps, eps));

    // splice consistency: left limit = continuous part at the location plus all
    // gaps strictly below it
    for (std::size_t k = 0; k <= m; ++k) {
        const auto cvals = continuous_part.slice_values(k);
        double below = 0.0;
        for (std::size_t i = 0; i < jumps.size(); ++i) {
            const double cv = lerp_unit_grid(cvals, jumps[i].location);
            if (std::abs(cv + below - jumps[i].lo[k]) > splice_tol)
                throw DomainError("fill_jumps: jump " + std::to_string(i) +
                                  " does not splice with the continuous part at node " +
                                  std::to_string(k));
            below += jumps[i].gap(k);
        }
    }

    // local fills, sized so their resolution tracks the output grid
    std::vector<GapFill> fills;
    fills.reserve(jumps.size());
    const double wide = 1.0 + spec.total_width();
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        const auto n_loc = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::ceil(spec.widths[i] / wide * static_cast<double>(n_out))) * 2);
        fills.push_back(fill_between(time, jumps[i].lo, jumps[i].hi, jumps[i].lo_vel,
                                     jumps[i].hi_vel, n_loc));
    }

    SpaceGrid out_grid(n_out);
    std::vector<double> vals((m + 1) * (n_out + 1));
    for (std::size_t k = 0; k <= m; ++k) {
        const auto cvals = continuous_part.slice_values(k);
        for (std::size_t j = 0; j <= n_out; ++j) {
            const double y = wide * out_grid.node(j); // widened coordinate
            double out;
            bool in_gap = false;
            for (std::size_t i = 0; i < jumps.size(); ++i) {
                const double glo = spec.gap_lower(i);
                if (y >= glo && y <= glo + spec.widths[i]) {
                    const double xi = (y - glo) / spec.widths[i];
                    const auto& f = fills[i];
                    const std::vector<double> row(
                        f.positions.begin() + k * (f.n_loc + 1),
                        f.positions.begin() + (k + 1) * (f.n_loc + 1));
                    out = lerp_unit_grid(row, xi);
                    in_gap = true;
                    break;
                }
            }
            if (!in_gap) {
                const double x = stairs_function_G(spec, y);
                double shift = 0.0;
                for (std::size_t i = 0; i < jumps.size(); ++i)
                    if (spec.gap_lower(i) + spec.widths[i] <= y) shift += jumps[i].gap(k);
                out = lerp_unit_grid(cvals, std::min(1.0, x)) + shift;
            }
            vals[k * (n_out + 1) + j] = out;
        }
        // splice tolerance may leave rounding-scale seams; snap ends exactly,
        // raise forward then clamp backward so the repair is monotone and the
        // top pin survives
        double* r = vals.data() + k * (n_out + 1);
        r[0] = 0.0;
        if (std::abs(r[n_out] - 1.0) > splice_tol)
            throw DomainError("fill_jumps: filled slice " + std::to_string(k) +
                              " ends at " + std::to_string(r[n_out]));
        for (std::size_t j = 0; j < n_out; ++j)
            if (r[j + 1] < r[j]) {
                if (r[j] - r[j + 1] > splice_tol)
                    throw MonotonicityViolation("fill_jumps: filled slice decreases at cell " +
                                                std::to_string(j));
                r[j + 1] = r[j];
            }
        r[n_out] = 1.0;
        for (std::size_t j = n_out; j-- > 0;) r[j] = std::min(r[j], r[j + 1]);
    }
    return PathGrid(out_grid, time, std::move(vals));
}

} // namespace mongeo
