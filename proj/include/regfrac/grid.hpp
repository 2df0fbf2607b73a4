#pragma once

#include "regfrac/box_grid.hpp"
#include "regfrac/geometry.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace regfrac {

/// Cell-centred grid over [-L, L]^2 together with the exterior mask
/// (1 = cell in R^2 \ K, 0 = cell in the obstacle).
class Grid2D {
public:
    Grid2D(BoxGrid box, std::vector<std::uint8_t> exterior_mask);

    /// Box without an obstacle: every cell is exterior.
    static Grid2D empty_box(double halfwidth, int n_cells);
    static Grid2D with_obstacle(double halfwidth, int n_cells, const Obstacle& obstacle);

    const BoxGrid& box() const { return box_; }
    double halfwidth() const { return box_.halfwidth; }
    int n_cells() const { return box_.n; }
    double h() const { return box_.h(); }
    std::size_t size() const { return box_.size(); }
    Vec2 center(std::size_t i) const { return box_.center(i); }

    bool exterior(std::size_t i) const { return mask_[i] != 0; }
    std::span<const std::uint8_t> mask() const { return mask_; }
    const std::vector<std::size_t>& exterior_cells() const { return exterior_; }
    const std::vector<std::size_t>& obstacle_cells() const { return obstacle_; }

    bool operator==(const Grid2D& other) const {
        return box_.halfwidth == other.box_.halfwidth && box_.n == other.box_.n && mask_ == other.mask_;
    }

private:
    BoxGrid box_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> exterior_;
    std::vector<std::size_t> obstacle_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

/// Density u on the exterior cells of a grid plus the constant value assumed
/// outside the computational box. Storage is dense (one value per cell);
/// entries on obstacle cells are kept at zero and never read as data.
class Field {
public:
    Field(GridPtr grid, double farfield = 0.0);
    Field(GridPtr grid, std::vector<double> values, double farfield);

    static Field constant(GridPtr grid, double value, double farfield);

    const Grid2D& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    double farfield() const { return farfield_; }
    void set_farfield(double v) { farfield_ = v; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// Min / max over exterior cells.
    double min() const;
    double max() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
    double farfield_ = 0.0;
};

}  // namespace regfrac
