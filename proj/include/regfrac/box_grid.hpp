#pragma once

#include <cmath>
#include <cstddef>

namespace regfrac {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Uniform cell-centred discretisation of the square [-L, L]^2 with n cells
/// per axis. Cells are stored row-major: index = row * n + col, row 0 at
/// y = -L + h/2, col 0 at x = -L + h/2.
struct BoxGrid {
    double halfwidth = 1.0;
    int n = 1;

    double h() const { return 2.0 * halfwidth / n; }
    std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col);
    }
    double coord(int k) const { return -halfwidth + (k + 0.5) * h(); }
    Vec2 center(std::size_t idx) const {
        const auto nn = static_cast<std::size_t>(n);
        return {coord(static_cast<int>(idx % nn)), coord(static_cast<int>(idx / nn))};
    }
};

}  // namespace regfrac
