#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mongeo/errors.hpp"
#include "mongeo/grid.hpp"

namespace mongeo {

/// One discontinuity of a relaxed path: fixed interior location, per-time-node
/// left/right limits and limit velocities. Limits must satisfy lo <= hi at every
/// node. Velocities are carried as independent data; check_velocity_consistency
/// reports how far they sit from finite differences of the limits (synthetic
/// inputs may prescribe velocities that no limit trajectory realizes).
struct JumpRecord {
    double location = 0.0;
    TimeGrid time;
    std::vector<double> lo;     // left limits,  m+1
    std::vector<double> hi;     // right limits, m+1
    std::vector<double> lo_vel; // m+1
    std::vector<double> hi_vel; // m+1

    JumpRecord() = default;

    JumpRecord(double x, TimeGrid t, std::vector<double> lo_, std::vector<double> hi_,
               std::vector<double> lo_v, std::vector<double> hi_v)
        : location(x), time(t), lo(std::move(lo_)), hi(std::move(hi_)),
          lo_vel(std::move(lo_v)), hi_vel(std::move(hi_v)) {
        validate();
    }

    /// Limits only; velocities derived by centered differences (one-sided ends).
    JumpRecord(double x, TimeGrid t, std::vector<double> lo_, std::vector<double> hi_)
        : location(x), time(t), lo(std::move(lo_)), hi(std::move(hi_)) {
        lo_vel = derive_velocity(lo, time);
        hi_vel = derive_velocity(hi, time);
        validate();
    }

    double gap(std::size_t k) const { return hi[k] - lo[k]; }

    double max_gap() const {
        double g = 0.0;
        for (std::size_t k = 0; k < lo.size(); ++k) g = std::max(g, gap(k));
        return g;
    }

    /// Max |stored velocity - finite difference of limits| over both sides.
    double check_velocity_consistency() const {
        const double dt = time.dt();
        double worst = 0.0;
        auto probe = [&](const std::vector<double>& f, const std::vector<double>& v) {
            const std::size_t m = time.m;
            worst = std::max(worst, std::abs(v[0] - (f[1] - f[0]) / dt));
            worst = std::max(worst, std::abs(v[m] - (f[m] - f[m - 1]) / dt));
            for (std::size_t k = 1; k < m; ++k)
                worst = std::max(worst, std::abs(v[k] - (f[k + 1] - f[k - 1]) / (2.0 * dt)));
        };
        probe(lo, lo_vel);
        probe(hi, hi_vel);
        return worst;
    }

private:
    static std::vector<double> derive_velocity(const std::vector<double>& f, const TimeGrid& t) {
        const double dt = t.dt();
        const std::size_t m = t.m;
        std::vector<double> v(f.size());
        v[0] = (f[1] - f[0]) / dt;
        v[m] = (f[m] - f[m - 1]) / dt;
        for (std::size_t k = 1; k < m; ++k) v[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
        return v;
    }

    void validate() {
        if (!(location > 0.0 && location < 1.0))
            throw DomainError("JumpRecord: location must be interior to (0,1)");
        const std::size_t want = time.nodes();
        if (lo.size() != want || hi.size() != want || lo_vel.size() != want ||
            hi_vel.size() != want)
            throw GridMismatch("JumpRecord: curve length does not match time grid");
        for (std::size_t k = 0; k < want; ++k) {
            if (hi[k] - lo[k] < -kJumpOrderTol)
                throw MonotonicityViolation("JumpRecord: hi < lo at time node " +
                                            std::to_string(k));
            if (hi[k] < lo[k]) hi[k] = lo[k]; // clamp rounding-level inversions
        }
    }

    static constexpr double kJumpOrderTol = 1e-12;
};

} // namespace mongeo
