#pragma once

#include "regfrac/box_grid.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace regfrac {

struct Disk {
    Vec2 center;
    double radius = 0.0;
};

/// Axis-aligned ellipse ((x-cx)/a)^2 + ((y-cy)/b)^2 <= 1.
struct Ellipse {
    Vec2 center;
    double a = 1.0;
    double b = 1.0;
};

/// Simple polygon, vertices stored counterclockwise. May be non-convex; the
/// owning Obstacle records whether it is.
struct Polygon {
    std::vector<Vec2> vertices;
};

/// Boolean cell mask aligned with a BoxGrid; a point belongs to K when the cell
/// containing it is set.
struct RasterMask {
    BoxGrid grid;
    std::vector<std::uint8_t> cells;
};

struct BoundingBox {
    Vec2 lo;
    Vec2 hi;
};

/// The open half-space {x : x.e > offset}.
struct HalfSpace {
    Vec2 e;
    double offset = 0.0;

    bool contains(Vec2 x) const { return dot(x, e) > offset; }
};

/// A compact obstacle K in the plane.
class Obstacle {
public:
    using Shape = std::variant<Disk, Ellipse, Polygon, RasterMask>;

    static Obstacle disk(Vec2 center, double radius);
    static Obstacle ellipse(Vec2 center, double a, double b);
    /// Vertices in either orientation; stored counterclockwise.
    static Obstacle polygon(std::vector<Vec2> vertices);
    /// declared_convex is set only if the mask passes is_convex.
    static Obstacle raster(RasterMask mask);

    const Shape& shape() const { return shape_; }
    bool declared_convex() const { return declared_convex_; }
    BoundingBox bounding_box() const;
    bool is_raster() const { return std::holds_alternative<RasterMask>(shape_); }

private:
    Obstacle(Shape shape, bool convex) : shape_(std::move(shape)), declared_convex_(convex) {}

    Shape shape_;
    bool declared_convex_ = false;
};

/// True iff x lies in the closed set K.
bool contains(const Obstacle& obstacle, Vec2 x);

/// Outward unit normal at a boundary point; at polygon corners the normalised
/// bisector of the two edge normals. Throws InvalidArgument for points farther
/// than tol_boundary from the boundary, HypothesisViolation for raster masks.
Vec2 outward_normal(const Obstacle& obstacle, Vec2 x, double tol_boundary = 1e-9);

/// Euclidean projection of x onto a convex obstacle.
Vec2 project(const Obstacle& obstacle, Vec2 x);

/// Half-space through x0 whose complement contains K; e points from the
/// projection of x0 onto K towards x0. Requires a convex obstacle and x0
/// outside K.
HalfSpace separating_halfspace(const Obstacle& obstacle, Vec2 x0);

bool is_convex(const Obstacle& obstacle);

/// Support function max_{y in K} y.e (raster cells count as full squares).
double support(const Obstacle& obstacle, Vec2 e);

/// Cell mask (1 = cell centre in K) for the given grid. Throws if the
/// obstacle's bounding box leaves the grid box.
std::vector<std::uint8_t> rasterize(const Obstacle& obstacle, const BoxGrid& grid);

/// Convex hull (counterclockwise, no collinear points) of a point set.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Signed area; positive for counterclockwise vertex order.
double signed_area(const std::vector<Vec2>& vertices);

}  // namespace regfrac
