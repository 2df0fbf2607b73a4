#include "regfrac/grid.hpp"

#include "regfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace regfrac {

Grid2D::Grid2D(BoxGrid box, std::vector<std::uint8_t> exterior_mask)
    : box_(box), mask_(std::move(exterior_mask)) {
    if (!(box_.halfwidth > 0.0) || box_.n < 1) throw InvalidArgument("grid: need halfwidth > 0 and n_cells >= 1");
    if (mask_.size() != box_.size()) throw InvalidArgument("grid: mask size does not match n_cells^2");
    for (std::size_t i = 0; i < mask_.size(); ++i) (mask_[i] ? exterior_ : obstacle_).push_back(i);
    if (exterior_.empty()) throw InvalidArgument("grid: no exterior cells");
}

Grid2D Grid2D::empty_box(double halfwidth, int n_cells) {
    BoxGrid box{halfwidth, n_cells};
    return Grid2D(box, std::vector<std::uint8_t>(box.size(), 1));
}

Grid2D Grid2D::with_obstacle(double halfwidth, int n_cells, const Obstacle& obstacle) {
    BoxGrid box{halfwidth, n_cells};
    auto inside = rasterize(obstacle, box);
    for (auto& c : inside) c = c ? 0 : 1;
    return Grid2D(box, std::move(inside));
}

Field::Field(GridPtr grid, double farfield) : grid_(std::move(grid)), farfield_(farfield) {
    if (!grid_) throw InvalidArgument("field: null grid");
    values_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values, double farfield)
    : grid_(std::move(grid)), values_(std::move(values)), farfield_(farfield) {
    if (!grid_) throw InvalidArgument("field: null grid");
    if (values_.size() != grid_->size()) throw InvalidArgument("field: value count does not match grid");
    for (std::size_t i : grid_->obstacle_cells()) values_[i] = 0.0;
}

Field Field::constant(GridPtr grid, double value, double farfield) {
    Field f(std::move(grid), farfield);
    for (std::size_t i : f.grid().exterior_cells()) f.values_[i] = value;
    return f;
}

double Field::min() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i : grid_->exterior_cells()) m = std::min(m, values_[i]);
    return m;
}

double Field::max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i : grid_->exterior_cells()) m = std::max(m, values_[i]);
    return m;
}

}  // namespace regfrac
