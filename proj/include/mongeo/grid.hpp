#pragma once

#include <cstddef>
#include <string>

#include "mongeo/errors.hpp"

namespace mongeo {

/// Uniform grid on [0,1] with n cells, nodes x_j = j/n.
struct SpaceGrid {
    std::size_t n = 0;

    SpaceGrid() = default;
    explicit SpaceGrid(std::size_t cells) : n(cells) {
        if (n == 0) throw DomainError("SpaceGrid: need at least one cell");
    }

    double h() const { return 1.0 / static_cast<double>(n); }
    std::size_t nodes() const { return n + 1; }
    double node(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(n); }

    bool operator==(const SpaceGrid&) const = default;
};

/// Uniform grid on [0,T] with m steps, nodes t_k = k*T/m.
struct TimeGrid {
    std::size_t m = 0;
    double T = 0.0;

    TimeGrid() = default;
    TimeGrid(std::size_t steps, double horizon) : m(steps), T(horizon) {
        if (m == 0) throw DomainError("TimeGrid: need at least one step");
        if (!(T >= 0.0)) throw DomainError("TimeGrid: horizon must be nonnegative");
    }

    double dt() const { return T / static_cast<double>(m); }
    std::size_t nodes() const { return m + 1; }
    double node(std::size_t k) const {
        return T * static_cast<double>(k) / static_cast<double>(m);
    }

    bool operator==(const TimeGrid&) const = default;
};

inline void require_same(const SpaceGrid& a, const SpaceGrid& b, const char* where) {
    if (!(a == b)) throw GridMismatch(std::string(where) + ": space grids differ");
}

inline void require_same(const TimeGrid& a, const TimeGrid& b, const char* where) {
    if (!(a == b)) throw GridMismatch(std::string(where) + ": time grids differ");
}

} // namespace mongeo
