#include "regfrac/geometry.hpp"

#include "regfrac/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace regfrac {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec2 normalized(Vec2 v) {
    const double n = norm(v);
    return {v.x / n, v.y / n};
}

// Closest point of a segment [p, q] to x.
Vec2 closest_on_segment(Vec2 p, Vec2 q, Vec2 x) {
    const Vec2 d = q - p;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return p;
    const double t = std::clamp(dot(x - p, d) / len2, 0.0, 1.0);
    return p + t * d;
}

// Even-odd crossing test; boundary points count as inside via the distance check
// performed by the caller.
bool crossing_inside(const std::vector<Vec2>& v, Vec2 x) {
    bool inside = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = v[i];
        const Vec2 b = v[j];
        if ((a.y > x.y) != (b.y > x.y)) {
            const double xc = a.x + (x.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (x.x < xc) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(const std::vector<Vec2>& v, Vec2 x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 c = closest_on_segment(v[i], v[(i + 1) % v.size()], x);
        best = std::min(best, norm(x - c));
    }
    return best;
}

bool chain_is_convex(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    if (n < 3) return true;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i];
        const Vec2 b = v[(i + 1) % n];
        const Vec2 c = v[(i + 2) % n];
        if (cross(b - a, c - b) < -1e-14 * (norm(b - a) * norm(c - b))) return false;
    }
    return true;
}

// Closest point of the ellipse boundary to an exterior point, by bisection on
// the Lagrange multiplier t >= 0 of  sum (a_k y_k / (t + a_k^2))^2 = 1.
Vec2 ellipse_boundary_projection(const Ellipse& e, Vec2 x) {
    const double y0 = x.x - e.center.x;
    const double y1 = x.y - e.center.y;
    const double a2 = e.a * e.a;
    const double b2 = e.b * e.b;
    auto F = [&](double t) {
        const double u = e.a * y0 / (t + a2);
        const double v = e.b * y1 / (t + b2);
        return u * u + v * v - 1.0;
    };
    double lo = 0.0;
    double hi = std::max(e.a, e.b) * std::hypot(y0, y1);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) > 0.0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    return {e.center.x + a2 * y0 / (t + a2), e.center.y + b2 * y1 / (t + b2)};
}

Vec2 project_onto_convex_polygon(const std::vector<Vec2>& v, Vec2 x) {
    if (v.size() == 1) return v.front();
    if (v.size() >= 3 && crossing_inside(v, x)) return x;
    double best = std::numeric_limits<double>::infinity();
    Vec2 best_pt = v.front();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2 c = closest_on_segment(v[i], v[(i + 1) % v.size()], x);
        const double d = norm(x - c);
        if (d < best) {
            best = d;
            best_pt = c;
        }
    }
    return best_pt;
}

std::vector<Vec2> raster_cell_centers(const RasterMask& m) {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < m.cells.size(); ++i)
        if (m.cells[i]) pts.push_back(m.grid.center(i));
    return pts;
}

bool inside_convex_hull(const std::vector<Vec2>& hull, Vec2 x, double tol) {
    if (hull.empty()) return false;
    if (hull.size() == 1) return norm(x - hull.front()) <= tol;
    if (hull.size() == 2) return norm(x - closest_on_segment(hull[0], hull[1], x)) <= tol;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2 a = hull[i];
        const Vec2 b = hull[(i + 1) % hull.size()];
        if (cross(b - a, x - a) < -tol * norm(b - a)) return false;
    }
    return true;
}

}  // namespace

Obstacle Obstacle::disk(Vec2 center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidArgument("disk: radius must be >= 0");
    return Obstacle(Disk{center, radius}, true);
}

Obstacle Obstacle::ellipse(Vec2 center, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("ellipse: semi-axes must be > 0");
    return Obstacle(Ellipse{center, a, b}, true);
}

Obstacle Obstacle::polygon(std::vector<Vec2> vertices) {
    if (vertices.size() < 3) throw InvalidArgument("polygon: at least three vertices required");
    const double area = signed_area(vertices);
    if (area == 0.0) throw InvalidArgument("polygon: degenerate (zero area)");
    if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
    const bool convex = chain_is_convex(vertices);
    return Obstacle(Polygon{std::move(vertices)}, convex);
}

Obstacle Obstacle::raster(RasterMask mask) {
    if (mask.cells.size() != mask.grid.size()) throw InvalidArgument("raster: mask size does not match its grid");
    Obstacle o(std::move(mask), false);
    o.declared_convex_ = is_convex(o);
    return o;
}

BoundingBox Obstacle::bounding_box() const {
    return std::visit(
        overloaded{
            [](const Disk& d) {
                return BoundingBox{{d.center.x - d.radius, d.center.y - d.radius},
                                   {d.center.x + d.radius, d.center.y + d.radius}};
            },
            [](const Ellipse& e) {
                return BoundingBox{{e.center.x - e.a, e.center.y - e.b}, {e.center.x + e.a, e.center.y + e.b}};
            },
            [](const Polygon& p) {
                BoundingBox b{p.vertices.front(), p.vertices.front()};
                for (Vec2 v : p.vertices) {
                    b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
                    b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
                }
                return b;
            },
            [](const RasterMask& m) {
                const double inf = std::numeric_limits<double>::infinity();
                BoundingBox b{{inf, inf}, {-inf, -inf}};
                const double half = 0.5 * m.grid.h();
                bool any = false;
                for (std::size_t i = 0; i < m.cells.size(); ++i) {
                    if (!m.cells[i]) continue;
                    any = true;
                    const Vec2 c = m.grid.center(i);
                    b.lo = {std::min(b.lo.x, c.x - half), std::min(b.lo.y, c.y - half)};
                    b.hi = {std::max(b.hi.x, c.x + half), std::max(b.hi.y, c.y + half)};
                }
                if (!any) b = BoundingBox{{0.0, 0.0}, {0.0, 0.0}};
                return b;
            },
        },
        shape_);
}

bool contains(const Obstacle& obstacle, Vec2 x) {
    return std::visit(overloaded{
                          [&](const Disk& d) { return norm(x - d.center) <= d.radius; },
                          [&](const Ellipse& e) {
                              const double u = (x.x - e.center.x) / e.a;
                              const double v = (x.y - e.center.y) / e.b;
                              return u * u + v * v <= 1.0;
                          },
                          [&](const Polygon& p) {
                              return crossing_inside(p.vertices, x) ||
                                     polygon_boundary_distance(p.vertices, x) <= 1e-12;
                          },
                          [&](const RasterMask& m) {
                              const double h = m.grid.h();
                              const double L = m.grid.halfwidth;
                              if (x.x < -L || x.x >= L || x.y < -L || x.y >= L) return false;
                              const int col = std::min(m.grid.n - 1, static_cast<int>((x.x + L) / h));
                              const int row = std::min(m.grid.n - 1, static_cast<int>((x.y + L) / h));
                              return m.cells[m.grid.index(row, col)] != 0;
                          },
                      },
                      obstacle.shape());
}

Vec2 outward_normal(const Obstacle& obstacle, Vec2 x, double tol_boundary) {
    auto not_boundary = [&](double dist) {
        return InvalidArgument("outward_normal: point is " + std::to_string(dist) +
                               " away from the boundary (tolerance " + std::to_string(tol_boundary) + ")");
    };
    return std::visit(
        overloaded{
            [&](const Disk& d) -> Vec2 {
                const Vec2 r = x - d.center;
                const double dist = std::abs(norm(r) - d.radius);
                if (dist > tol_boundary || norm(r) == 0.0) throw not_boundary(dist);
                return normalized(r);
            },
            [&](const Ellipse& e) -> Vec2 {
                const double u = (x.x - e.center.x) / e.a;
                const double v = (x.y - e.center.y) / e.b;
                const Vec2 grad{2.0 * u / e.a, 2.0 * v / e.b};
                // first-order distance |F| / |grad F|
                const double dist = std::abs(u * u + v * v - 1.0) / norm(grad);
                if (dist > tol_boundary) throw not_boundary(dist);
                return normalized(grad);
            },
            [&](const Polygon& p) -> Vec2 {
                const auto& v = p.vertices;
                const std::size_t n = v.size();
                auto edge_normal = [&](std::size_t i) {
                    const Vec2 d = v[(i + 1) % n] - v[i];
                    return normalized(Vec2{d.y, -d.x});
                };
                double best = std::numeric_limits<double>::infinity();
                std::size_t best_edge = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dist = norm(x - closest_on_segment(v[i], v[(i + 1) % n], x));
                    if (dist < best) {
                        best = dist;
                        best_edge = i;
                    }
                }
                if (best > tol_boundary) throw not_boundary(best);
                const double corner_tol = std::max(tol_boundary, 1e-12);
                for (std::size_t i = 0; i < n; ++i) {
                    if (norm(x - v[i]) <= corner_tol) {
                        const Vec2 bis = edge_normal((i + n - 1) % n) + edge_normal(i);
                        return normalized(bis);
                    }
                }
                return edge_normal(best_edge);
            },
            [&](const RasterMask&) -> Vec2 {
                throw HypothesisViolation("outward_normal: not defined for raster masks");
            },
        },
        obstacle.shape());
}

Vec2 project(const Obstacle& obstacle, Vec2 x) {
    if (!obstacle.declared_convex()) throw HypothesisViolation("project: obstacle is not convex");
    return std::visit(overloaded{
                          [&](const Disk& d) -> Vec2 {
                              const Vec2 r = x - d.center;
                              const double len = norm(r);
                              if (len <= d.radius) return x;
                              return d.center + (d.radius / len) * r;
                          },
                          [&](const Ellipse& e) -> Vec2 {
                              if (contains(obstacle, x)) return x;
                              return ellipse_boundary_projection(e, x);
                          },
                          [&](const Polygon& p) -> Vec2 { return project_onto_convex_polygon(p.vertices, x); },
                          [&](const RasterMask& m) -> Vec2 {
                              const auto hull = convex_hull(raster_cell_centers(m));
                              if (hull.empty()) throw InvalidArgument("project: empty raster mask");
                              return project_onto_convex_polygon(hull, x);
                          },
                      },
                      obstacle.shape());
}

HalfSpace separating_halfspace(const Obstacle& obstacle, Vec2 x0) {
    if (!obstacle.declared_convex())
        throw HypothesisViolation("separating_halfspace: obstacle is not declared convex");
    if (contains(obstacle, x0)) throw InvalidArgument("separating_halfspace: x0 lies inside K");
    const Vec2 p = project(obstacle, x0);
    const Vec2 d = x0 - p;
    if (norm(d) == 0.0) throw InvalidArgument("separating_halfspace: x0 lies on the boundary of K");
    const Vec2 e = normalized(d);
    return HalfSpace{e, dot(x0, e)};
}

double support(const Obstacle& obstacle, Vec2 e) {
    return std::visit(overloaded{
                          [&](const Disk& d) { return dot(d.center, e) + d.radius * norm(e); },
                          [&](const Ellipse& el) { return dot(el.center, e) + std::hypot(el.a * e.x, el.b * e.y); },
                          [&](const Polygon& p) {
                              double m = -std::numeric_limits<double>::infinity();
                              for (Vec2 v : p.vertices) m = std::max(m, dot(v, e));
                              return m;
                          },
                          [&](const RasterMask& r) {
                              const double half = 0.5 * r.grid.h();
                              const double corner = half * (std::abs(e.x) + std::abs(e.y));
                              double m = -std::numeric_limits<double>::infinity();
                              for (std::size_t i = 0; i < r.cells.size(); ++i)
                                  if (r.cells[i]) m = std::max(m, dot(r.grid.center(i), e) + corner);
                              return m;
                          },
                      },
                      obstacle.shape());
}

bool is_convex(const Obstacle& obstacle) {
    return std::visit(overloaded{
                          [](const Disk&) { return true; },
                          [](const Ellipse&) { return true; },
                          [](const Polygon& p) { return chain_is_convex(p.vertices); },
                          [](const RasterMask& m) {
                              const auto pts = raster_cell_centers(m);
                              const auto hull = convex_hull(pts);
                              const double tol = 1e-9 * m.grid.h();
                              for (std::size_t i = 0; i < m.cells.size(); ++i) {
                                  const bool in_hull = inside_convex_hull(hull, m.grid.center(i), tol);
                                  if (in_hull != (m.cells[i] != 0)) return false;
                              }
                              return true;
                          },
                      },
                      obstacle.shape());
}

std::vector<std::uint8_t> rasterize(const Obstacle& obstacle, const BoxGrid& grid) {
    const BoundingBox b = obstacle.bounding_box();
    const double L = grid.halfwidth;
    if (b.lo.x < -L || b.lo.y < -L || b.hi.x > L || b.hi.y > L)
        throw InvalidArgument("rasterize: obstacle bounding box leaves the grid box [-" + std::to_string(L) + ", " +
                              std::to_string(L) + "]^2");
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = contains(obstacle, grid.center(i)) ? 1 : 0;
    return mask;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

double signed_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

}  // namespace regfrac
