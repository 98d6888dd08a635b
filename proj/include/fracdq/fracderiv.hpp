#pragma once

#include "fracdq/error.hpp"
#include "fracdq/geometry.hpp"
#include "fracdq/nodes.hpp"
#include "fracdq/parallel.hpp"
#include "fracdq/quadrature.hpp"
#include "fracdq/rbf.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace fracdq {

/// Orders just below 2 are rejected: the 1/Gamma(2 - alpha) prefactor is
/// ill-conditioned there and alpha = 2 itself is handled exactly.
inline void check_fractional_order(double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw InvalidInput("fractional order must lie in (1, 2], got " + std::to_string(alpha));
    }
    if (alpha != 2.0 && alpha > 2.0 - 1e-8) {
        throw InvalidInput("fractional order within 1e-8 of 2 is ill-conditioned; use 2 exactly");
    }
}

/// Caputo directional derivative of the kernel centred at `center`,
/// evaluated at `node`. `z` is the distance from the node to the boundary
/// along (-cos theta, -sin theta).
///
/// For alpha < 2 the integral over [0, z] with the weak singularity
/// w^(1 - alpha) is mapped onto [-1, 1] by w = z (1 + s) / 2 and evaluated with
/// the Gauss-Jacobi rule for the weight (1 + s)^(1 - alpha).
inline double frac_dir_deriv(const RbfKind& kind, Point2 center, Point2 node, const Direction& d,
                             double alpha, double z, const JacobiRule& rule) {
    check_fractional_order(alpha);
    if (alpha == 2.0) {
        return kind.dir2(center, node, d);
    }
    if (rule.alpha != alpha) {
        throw InvalidInput("Gauss-Jacobi rule built for alpha " + std::to_string(rule.alpha) +
                           " used with alpha " + std::to_string(alpha));
    }
    if (!(z >= 0.0)) {
        throw InvalidInput("boundary distance must be nonnegative");
    }
    if (z == 0.0) {
        return 0.0;
    }
    const double c = d.cos();
    const double s = d.sin();
    const double half = 0.5 * z;
    const double rx0 = node.x - center.x;
    const double ry0 = node.y - center.y;
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = half * (1.0 + rule.points[q]);
        sum += rule.weights[q] * kind.dir2(rx0 - c * w, ry0 - s * w, c, s);
    }
    return std::pow(half, 2.0 - alpha) / std::tgamma(2.0 - alpha) * sum;
}

enum class AxisSide { Left, Right };

/// Caputo derivative in x written with the chord limits directly: the left
/// derivative (theta = 0) integrates from `limit` = a up to the node, the
/// right one (theta = pi) from the node up to `limit` = b.
inline double axis_frac_deriv(const RbfKind& kind, Point2 center, Point2 node, AxisSide side,
                              double alpha, double limit, const JacobiRule& rule) {
    check_fractional_order(alpha);
    if (alpha == 2.0) {
        return kind.dir2(node.x - center.x, node.y - center.y, 1.0, 0.0);
    }
    const double len = side == AxisSide::Left ? node.x - limit : limit - node.x;
    if (len <= 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double offset = 0.5 * len * (1.0 + rule.points[q]);
        const double x = side == AxisSide::Left ? node.x - offset : node.x + offset;
        sum += rule.weights[q] * kind.dir2(x - center.x, node.y - center.y, 1.0, 0.0);
    }
    return std::pow(0.5 * len, 2.0 - alpha) / std::tgamma(2.0 - alpha) * sum;
}

/// Derivatives of all kernels (centred at every node) at one node.
inline std::vector<double> frac_deriv_vector(const RbfKind& kind, const NodeSet& centers,
                                             std::size_t node_index, const Direction& d,
                                             double alpha, const Domain& domain,
                                             const JacobiRule& rule) {
    if (node_index >= centers.size()) {
        throw InvalidInput("node index out of range");
    }
    const Point2 node = centers.points[node_index];
    const double z = alpha == 2.0 ? 0.0 : boundary_distance(domain, node, d);
    std::vector<double> out(centers.size());
    for (std::size_t k = 0; k < centers.size(); ++k) {
        out[k] = frac_dir_deriv(kind, centers.points[k], node, d, alpha, z, rule);
    }
    return out;
}

/// Matrix R with R(k, i) = D^alpha_theta phi_k(x_i). Columns are assembled
/// in parallel; z is computed once per node.
inline Eigen::MatrixXd frac_deriv_matrix(const RbfKind& kind, const NodeSet& nodes,
                                         const Direction& d, double alpha, const Domain& domain,
                                         const JacobiRule& rule) {
    check_fractional_order(alpha);
    const std::size_t n = nodes.size();
    Eigen::MatrixXd out(n, n);
    parallel_for(n, [&](std::size_t i) {
        const auto col = frac_deriv_vector(kind, nodes, i, d, alpha, domain, rule);
        for (std::size_t k = 0; k < n; ++k) out(k, i) = col[k];
    });
    return out;
}

}  // namespace fracdq
