#pragma once

#include "fracdq/error.hpp"
#include "fracdq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fracdq {

/// Collocation points with their interior/boundary partition. The index
/// lists are sorted and together cover 0..size()-1 exactly once.
struct NodeSet {
    std::vector<Point2> points;
    std::vector<std::size_t> interior_idx;
    std::vector<std::size_t> boundary_idx;

    std::size_t size() const noexcept { return points.size(); }

    /// Builds the partition from a parallel list of boundary flags.
    static NodeSet from_flags(std::vector<Point2> pts, const std::vector<bool>& on_boundary) {
        NodeSet out;
        out.points = std::move(pts);
        for (std::size_t i = 0; i < out.points.size(); ++i) {
            (on_boundary[i] ? out.boundary_idx : out.interior_idx).push_back(i);
        }
        return out;
    }

    bool is_boundary(std::size_t i) const {
        return std::binary_search(boundary_idx.begin(), boundary_idx.end(), i);
    }
};

inline double min_pairwise_distance(const std::vector<Point2>& pts) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::min(d, distance(pts[i], pts[j]));
    return d;
}

namespace detail {

inline std::string point_str(Point2 p) {
    std::ostringstream os;
    os << std::setprecision(17) << "(" << p.x << ", " << p.y << ")";
    return os.str();
}

}  // namespace detail

/// Checks the partition, the flags against the domain and the separation of
/// the points. Throws InvalidInput naming the first offending point.
inline void validate(const NodeSet& nodes, const Domain& domain) {
    const std::size_t n = nodes.size();
    std::vector<int> seen(n, 0);
    auto mark = [&](const std::vector<std::size_t>& idx, Location expected) {
        for (std::size_t i : idx) {
            if (i >= n) throw InvalidInput("node index " + std::to_string(i) + " out of range");
            ++seen[i];
            const Location loc = classify(domain, nodes.points[i]);
            if (loc != expected) {
                throw InvalidInput("node " + std::to_string(i) + " " +
                                   detail::point_str(nodes.points[i]) + " is flagged " +
                                   to_string(expected) + " but classifies as " + to_string(loc));
            }
        }
    };
    mark(nodes.interior_idx, Location::Interior);
    mark(nodes.boundary_idx, Location::Boundary);
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i] != 1) {
            throw InvalidInput("node " + std::to_string(i) + " is not in exactly one index list");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance(nodes.points[i], nodes.points[j]) <= 1e-12) {
                throw InvalidInput("duplicate nodes " + std::to_string(i) + " and " +
                                   std::to_string(j) + " at " +
                                   detail::point_str(nodes.points[i]));
            }
}

/// Chebyshev-Gauss-Lobatto points x_j = 0.5 (1 - cos(j pi / M)) (b - a) + a.
inline NodeSet chebyshev_1d(double a, double b, int M) {
    if (M < 2) throw InvalidInput("chebyshev_1d requires M >= 2");
    if (!(a < b)) throw InvalidInput("chebyshev_1d requires a < b");
    std::vector<Point2> pts;
    std::vector<bool> flags;
    for (int j = 0; j <= M; ++j) {
        pts.push_back({0.5 * (1.0 - std::cos(j * std::numbers::pi / M)) * (b - a) + a, 0.0});
        flags.push_back(j == 0 || j == M);
    }
    pts.front().x = a;
    pts.back().x = b;
    return NodeSet::from_flags(std::move(pts), flags);
}

/// Points along the boundary with spacing close to h. Polygon vertices are
/// always included.
inline std::vector<Point2> sample_boundary(const Domain& domain, double h) {
    std::vector<Point2> out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Interval>) {
                out = {{s.a, 0.0}, {s.b, 0.0}};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                const auto& v = s.vertices;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const Point2 a = v[i];
                    const Point2 e = v[(i + 1) % v.size()] - a;
                    const int nseg = std::max(1, static_cast<int>(std::lround(norm(e) / h)));
                    for (int k = 0; k < nseg; ++k) {
                        out.push_back(a + (static_cast<double>(k) / nseg) * e);
                    }
                }
            } else {
                const double circ = 2.0 * std::numbers::pi * s.radius;
                const int n = std::max(8, static_cast<int>(std::lround(circ / h)));
                for (int k = 0; k < n; ++k) {
                    const double phi = 2.0 * std::numbers::pi * k / n;
                    out.push_back(s.center + s.radius * Point2{std::cos(phi), std::sin(phi)});
                }
            }
        },
        domain.shape());
    return out;
}

namespace detail {

inline double min_distance_to(Point2 p, const std::vector<Point2>& pts) {
    double d = std::numeric_limits<double>::infinity();
    for (auto q : pts) d = std::min(d, distance(p, q));
    return d;
}

inline NodeSet lattice_nodes(const Domain& domain, int nx) {
    const auto [lo, hi] = domain.bounding_box();
    const double h = (hi.x - lo.x) / nx;
    const int ny = static_cast<int>(std::floor((hi.y - lo.y) / h + 1e-9));

    std::vector<Point2> interior;
    std::vector<Point2> boundary;
    std::vector<Point2> ordered;  // lattice order, interior and boundary mixed
    std::vector<bool> flags;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const double y = (j == ny && std::abs(lo.y + j * h - hi.y) < 1e-9 * h) ? hi.y : lo.y + j * h;
            const Point2 p{i == nx ? hi.x : lo.x + i * h, y};
            const Location loc = classify(domain, p);
            if (loc == Location::Exterior) continue;
            ordered.push_back(p);
            flags.push_back(loc == Location::Boundary);
            (loc == Location::Boundary ? boundary : interior).push_back(p);
        }
    }
    // Fill the boundary at the lattice spacing where the lattice misses it.
    for (auto q : sample_boundary(domain, h)) {
        if (min_distance_to(q, boundary) > 0.25 * h) {
            boundary.push_back(q);
            ordered.push_back(q);
            flags.push_back(true);
        }
    }
    std::vector<Point2> pts;
    std::vector<bool> keep_flags;
    for (std::size_t k = 0; k < ordered.size(); ++k) {
        if (!flags[k]) {
            const Point2 p = ordered[k];
            if (domain.distance_to_boundary(p) < 0.25 * h || min_distance_to(p, boundary) < 0.5 * h)
                continue;
        }
        pts.push_back(ordered[k]);
        keep_flags.push_back(flags[k]);
    }
    return NodeSet::from_flags(std::move(pts), keep_flags);
}

// SplitMix64, used to derive the quasi-random shift from the seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Van der Corput radical inverse of index in the given base.
inline double radical_inverse(std::uint64_t index, unsigned base) {
    const double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

/// Uniform lattice over the bounding box, lattice spacing chosen so the
/// retained count is as close as possible to target_count. The boundary is
/// completed by sampling it at the lattice spacing.
inline NodeSet grid_2d(const Domain& domain, int target_count) {
    if (domain.is_1d()) throw InvalidInput("grid_2d needs a 2D domain");
    if (target_count < 1) throw InvalidInput("grid_2d needs a positive target count");
    NodeSet best;
    long best_gap = std::numeric_limits<long>::max();
    for (int nx = 1; nx < 4096; ++nx) {
        NodeSet cand = detail::lattice_nodes(domain, nx);
        const long gap = std::labs(static_cast<long>(cand.size()) - target_count);
        if (gap < best_gap) {
            best_gap = gap;
            best = std::move(cand);
        }
        if (static_cast<long>(cand.size()) > 2L * target_count + 16) break;
    }
    if (best.size() < 8) {
        throw InvalidInput("grid_2d produced only " + std::to_string(best.size()) + " points");
    }
    return best;
}

/// Deterministic scattered set: the boundary sampled at the mean spacing
/// plus interior points drawn from a shifted Halton (2, 3) stream and thinned
/// to a minimum separation. Returns exactly target_count points.
inline NodeSet scattered_2d(const Domain& domain, int target_count, std::uint64_t seed) {
    if (domain.is_1d()) throw InvalidInput("scattered_2d needs a 2D domain");
    if (target_count < 8) throw InvalidInput("scattered_2d needs a target count of at least 8");
    const double area = domain.area();
    const double perim = domain.perimeter();
    const double target = target_count;
    // Spacing h solving area / h^2 + perimeter / h = target.
    const double h = (perim + std::sqrt(perim * perim + 4.0 * area * target)) / (2.0 * target);
    const double floor_sep = 0.5 / std::sqrt(target) * domain.diameter();

    const std::vector<Point2> boundary = sample_boundary(domain, h);
    if (boundary.size() >= static_cast<std::size_t>(target_count)) {
        throw InvalidInput("scattered_2d: boundary alone needs " +
                           std::to_string(boundary.size()) + " points");
    }
    const std::size_t need = target_count - boundary.size();

    std::uint64_t state = seed;
    const double shift_x = (detail::splitmix64(state) >> 11) * 0x1.0p-53;
    const double shift_y = (detail::splitmix64(state) >> 11) * 0x1.0p-53;
    const auto [lo, hi] = domain.bounding_box();
    const std::uint64_t budget = 256ULL * static_cast<std::uint64_t>(target_count) + 4096;

    std::size_t achieved = boundary.size();
    for (double radius = 0.8 * h; radius >= floor_sep; radius *= 0.95) {
        std::vector<Point2> accepted = boundary;
        for (std::uint64_t i = 1; i <= budget && accepted.size() < boundary.size() + need; ++i) {
            double u = radical_inverse(i, 2) + shift_x;
            double v = radical_inverse(i, 3) + shift_y;
            u -= std::floor(u);
            v -= std::floor(v);
            const Point2 p{lo.x + u * (hi.x - lo.x), lo.y + v * (hi.y - lo.y)};
            if (classify(domain, p) != Location::Interior) continue;
            if (domain.distance_to_boundary(p) < 0.5 * radius) continue;
            if (detail::min_distance_to(p, accepted) < radius) continue;
            accepted.push_back(p);
        }
        achieved = std::max(achieved, accepted.size());
        if (accepted.size() == boundary.size() + need) {
            std::vector<bool> flags(accepted.size(), false);
            std::fill(flags.begin(), flags.begin() + boundary.size(), true);
            return NodeSet::from_flags(std::move(accepted), flags);
        }
    }
    throw InvalidInput("scattered_2d: target " + std::to_string(target_count) +
                       " unreachable at the separation floor (achieved " +
                       std::to_string(achieved) + ")");
}

inline void save_nodes(std::ostream& os, const NodeSet& nodes) {
    os << "# fracdq nodes v1\n" << std::setprecision(17);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        os << nodes.points[i].x << ' ' << nodes.points[i].y << ' '
           << (nodes.is_boundary(i) ? "boundary" : "interior") << '\n';
    }
}

inline void save_nodes(const std::string& path, const NodeSet& nodes) {
    std::ofstream os(path);
    if (!os) throw InvalidInput("cannot open '" + path + "' for writing");
    save_nodes(os, nodes);
}

/// Parses the node text format and validates every point against the domain.
inline NodeSet parse_nodes(std::istream& is, const Domain& domain) {
    std::vector<Point2> pts;
    std::vector<bool> flags;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string xs, ys, flag, extra;
        if (!(ls >> xs >> ys >> flag) || (ls >> extra)) {
            throw ParseError("expected 'x y flag'", lineno);
        }
        auto number = [&](const std::string& s) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != s.size() || !std::isfinite(v)) {
                throw ParseError("invalid number '" + s + "'", lineno);
            }
            return v;
        };
        const Point2 p{number(xs), number(ys)};
        if (flag != "interior" && flag != "boundary") {
            throw ParseError("flag must be 'interior' or 'boundary', got '" + flag + "'", lineno);
        }
        pts.push_back(p);
        flags.push_back(flag == "boundary");
    }
    NodeSet nodes = NodeSet::from_flags(std::move(pts), flags);
    validate(nodes, domain);
    return nodes;
}

inline NodeSet load_nodes(const std::string& path, const Domain& domain) {
    std::ifstream is(path);
    if (!is) throw InvalidInput("cannot open node file '" + path + "'");
    return parse_nodes(is, domain);
}

}  // namespace fracdq
