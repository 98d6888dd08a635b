#pragma once

#include "fracdq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fracdq {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Angle of a fractional directional derivative. The derivative integrates
/// backwards along (-cos theta, -sin theta).
class Direction {
public:
    explicit Direction(double theta) {
        if (!std::isfinite(theta)) {
            throw InvalidInput("direction angle must be finite");
        }
        constexpr double two_pi = 2.0 * std::numbers::pi;
        theta = std::fmod(theta, two_pi);
        if (theta < 0.0) {
            theta += two_pi;
        }
        if (theta >= two_pi) {
            theta = 0.0;
        }
        theta_ = theta;
        cos_ = std::cos(theta);
        sin_ = std::sin(theta);
        // Snap the axis directions so that 1D and axis-aligned problems see
        // exact unit components.
        const double quarter = theta / (0.5 * std::numbers::pi);
        const double nearest = std::round(quarter);
        if (std::abs(quarter - nearest) < 1e-15) {
            switch (static_cast<int>(nearest) % 4) {
                case 0: cos_ = 1.0; sin_ = 0.0; break;
                case 1: cos_ = 0.0; sin_ = 1.0; break;
                case 2: cos_ = -1.0; sin_ = 0.0; break;
                default: cos_ = 0.0; sin_ = -1.0; break;
            }
        }
    }

    double theta() const noexcept { return theta_; }
    double cos() const noexcept { return cos_; }
    double sin() const noexcept { return sin_; }
    Point2 unit() const noexcept { return {cos_, sin_}; }
    /// Direction the Caputo integral travels from the node.
    Point2 backward() const noexcept { return {-cos_, -sin_}; }

    bool is_axis_x() const noexcept { return sin_ == 0.0; }

private:
    double theta_ = 0.0;
    double cos_ = 1.0;
    double sin_ = 0.0;
};

struct Interval {
    double a = 0.0;
    double b = 1.0;
};

/// Simple polygon with counter-clockwise vertex order.
struct Polygon {
    std::vector<Point2> vertices;
};

struct Circle {
    Point2 center;
    double radius = 1.0;
};

enum class Location { Interior, Boundary, Exterior };

inline const char* to_string(Location loc) {
    switch (loc) {
        case Location::Interior: return "interior";
        case Location::Boundary: return "boundary";
        default: return "exterior";
    }
}

namespace detail {

inline double segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 e = b - a;
    const double len2 = dot(e, e);
    double s = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return distance(p, a + s * e);
}

// Proper or touching intersection of closed segments [a,b] and [c,d].
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    auto orient = [](Point2 p, Point2 q, Point2 r) {
        const double v = cross(q - p, r - p);
        return (v > 0.0) - (v < 0.0);
    };
    auto on_segment = [](Point2 p, Point2 q, Point2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

inline double signed_area(const std::vector<Point2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += cross(v[i], v[(i + 1) % v.size()]);
    }
    return 0.5 * s;
}

}  // namespace detail

/// Computational domain: an interval (1D problems, y == 0), a simple
/// counter-clockwise polygon, or a disk.
class Domain {
public:
    using Shape = std::variant<Interval, Polygon, Circle>;

    static Domain interval(double a, double b) {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
            throw InvalidInput("interval requires finite a < b");
        }
        return Domain(Interval{a, b});
    }

    static Domain polygon(std::vector<Point2> vertices) {
        const std::size_t n = vertices.size();
        if (n < 3) {
            throw InvalidInput("polygon needs at least 3 vertices");
        }
        for (auto& v : vertices) {
            if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
                throw InvalidInput("polygon vertex is not finite");
            }
        }
        if (detail::signed_area(vertices) <= 0.0) {
            throw InvalidInput("polygon vertices must be counter-clockwise");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (vertices[i] == vertices[(i + 1) % n]) {
                throw InvalidInput("polygon has a repeated vertex");
            }
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if (adjacent) continue;
                if (detail::segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                                               vertices[(j + 1) % n])) {
                    throw InvalidInput("polygon is not simple (edges " + std::to_string(i) +
                                       " and " + std::to_string(j) + " intersect)");
                }
            }
        }
        return Domain(Polygon{std::move(vertices)});
    }

    static Domain circle(Point2 center, double radius) {
        if (!(radius > 0.0) || !std::isfinite(radius)) {
            throw InvalidInput("circle radius must be positive");
        }
        return Domain(Circle{center, radius});
    }

    static Domain unit_square() { return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

    static Domain l_shape() {
        return polygon({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}});
    }

    /// Trapezoid whose slanted edge is x = 1.5 - 0.5 y.
    static Domain trapezoid() { return polygon({{0, 0}, {1.5, 0}, {1, 1}, {0, 1}}); }

    static Domain unit_disk() { return circle({0.5, 0.5}, 0.5); }

    const Shape& shape() const noexcept { return shape_; }
    bool is_1d() const noexcept { return std::holds_alternative<Interval>(shape_); }
    double diameter() const noexcept { return diameter_; }
    double boundary_tol() const noexcept { return 1e-10 * diameter_; }

    /// Axis-aligned bounding box as (lower-left, upper-right).
    std::pair<Point2, Point2> bounding_box() const {
        return std::visit(
            [](const auto& s) -> std::pair<Point2, Point2> {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Interval>) {
                    return {{s.a, 0.0}, {s.b, 0.0}};
                } else if constexpr (std::is_same_v<T, Polygon>) {
                    Point2 lo = s.vertices.front();
                    Point2 hi = lo;
                    for (auto v : s.vertices) {
                        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
                        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
                    }
                    return {lo, hi};
                } else {
                    const Point2 r{s.radius, s.radius};
                    return {s.center - r, s.center + r};
                }
            },
            shape_);
    }

    double area() const {
        return std::visit(
            [](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Interval>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T, Polygon>) {
                    return detail::signed_area(s.vertices);
                } else {
                    return std::numbers::pi * s.radius * s.radius;
                }
            },
            shape_);
    }

    double perimeter() const {
        return std::visit(
            [](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Interval>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T, Polygon>) {
                    double len = 0.0;
                    for (std::size_t i = 0; i < s.vertices.size(); ++i) {
                        len += distance(s.vertices[i], s.vertices[(i + 1) % s.vertices.size()]);
                    }
                    return len;
                } else {
                    return 2.0 * std::numbers::pi * s.radius;
                }
            },
            shape_);
    }

    /// Unsigned distance from p to the boundary.
    double distance_to_boundary(Point2 p) const {
        return std::visit(
            [p](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Interval>) {
                    const double dx = std::min(std::abs(p.x - s.a), std::abs(p.x - s.b));
                    return std::hypot(dx, p.y);
                } else if constexpr (std::is_same_v<T, Polygon>) {
                    double d = std::numeric_limits<double>::infinity();
                    const auto& v = s.vertices;
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        d = std::min(d, detail::segment_distance(p, v[i], v[(i + 1) % v.size()]));
                    }
                    return d;
                } else {
                    return std::abs(distance(p, s.center) - s.radius);
                }
            },
            shape_);
    }

private:
    explicit Domain(Shape shape) : shape_(std::move(shape)) {
        diameter_ = std::visit(
            [](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, Interval>) {
                    return s.b - s.a;
                } else if constexpr (std::is_same_v<T, Polygon>) {
                    double d = 0.0;
                    for (auto a : s.vertices)
                        for (auto b : s.vertices) d = std::max(d, distance(a, b));
                    return d;
                } else {
                    return 2.0 * s.radius;
                }
            },
            shape_);
    }

    Shape shape_;
    double diameter_ = 0.0;
};

namespace detail {

// Even-odd crossing test; only meaningful away from the boundary.
inline bool polygon_contains(const Polygon& poly, Point2 p) {
    bool inside = false;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double xc = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

}  // namespace detail

inline Location classify(const Domain& domain, Point2 p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        return Location::Exterior;
    }
    const double tol = domain.boundary_tol();
    if (domain.distance_to_boundary(p) <= tol) {
        return Location::Boundary;
    }
    return std::visit(
        [&](const auto& s) -> Location {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                return (std::abs(p.y) <= tol && s.a < p.x && p.x < s.b) ? Location::Interior
                                                                        : Location::Exterior;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return detail::polygon_contains(s, p) ? Location::Interior : Location::Exterior;
            } else {
                return distance(p, s.center) < s.radius ? Location::Interior : Location::Exterior;
            }
        },
        domain.shape());
}

namespace detail {

// Distance along the ray p + t*v (|v| = 1) until it first leaves the closed
// polygon. Candidate parameters are all edge crossings; the first gap whose
// midpoint lies outside marks the exit.
inline double polygon_exit_distance(const Domain& domain, const Polygon& poly, Point2 p, Point2 v) {
    const double tol = domain.boundary_tol();
    std::vector<double> ts{0.0};
    const auto& vert = poly.vertices;
    for (std::size_t i = 0; i < vert.size(); ++i) {
        const Point2 a = vert[i];
        const Point2 b = vert[(i + 1) % vert.size()];
        const Point2 e = b - a;
        const double len = norm(e);
        const Point2 eu = (1.0 / len) * e;
        const double det = cross(v, eu);
        const Point2 ap = a - p;
        if (std::abs(det) > 1e-14) {
            const double t = cross(ap, eu) / det;
            const double s = cross(ap, v) / det / len;
            if (s >= -1e-12 && s <= 1.0 + 1e-12 && t > tol) {
                ts.push_back(t);
            }
        } else if (std::abs(cross(ap, v)) <= tol) {
            // Collinear edge: the ray slides along it.
            for (Point2 q : {a, b}) {
                const double t = dot(q - p, v);
                if (t > tol) ts.push_back(t);
            }
        }
    }
    std::sort(ts.begin(), ts.end());
    std::vector<double> uniq;
    for (double t : ts) {
        if (uniq.empty() || t - uniq.back() > tol) uniq.push_back(t);
    }
    for (std::size_t k = 0; k + 1 < uniq.size(); ++k) {
        const double mid = 0.5 * (uniq[k] + uniq[k + 1]);
        if (classify(domain, p + mid * v) == Location::Exterior) {
            return uniq[k];
        }
    }
    return uniq.back();
}

}  // namespace detail

/// Distance from p to the boundary along (-cos theta, -sin theta), stopping at
/// the first point where the ray leaves the domain.
inline double boundary_distance(const Domain& domain, Point2 p, const Direction& d) {
    const Location loc = classify(domain, p);
    if (loc == Location::Exterior) {
        throw GeometryError("boundary_distance: point (" + std::to_string(p.x) + ", " +
                            std::to_string(p.y) + ") lies outside the domain");
    }
    const Point2 v = d.backward();
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                if (!d.is_axis_x()) {
                    throw InvalidInput("1D domains only support theta = 0 or pi");
                }
                return std::max(0.0, v.x < 0.0 ? p.x - s.a : s.b - p.x);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return detail::polygon_exit_distance(domain, s, p, v);
            } else {
                const Point2 q = p - s.center;
                const double b = dot(q, v);
                const double c = dot(q, q) - s.radius * s.radius;
                const double disc = std::max(0.0, b * b - c);
                return std::max(0.0, -b + std::sqrt(disc));
            }
        },
        domain.shape());
}

/// Horizontal chord limits (a, b) through p: the boundary points reached
/// going left and right.
inline std::pair<double, double> axis_limits(const Domain& domain, Point2 p) {
    const double left = boundary_distance(domain, p, Direction(0.0));
    const double right = boundary_distance(domain, p, Direction(std::numbers::pi));
    return {p.x - left, p.x + right};
}

}  // namespace fracdq
