#pragma once

#include "fracdq/error.hpp"
#include "fracdq/fracderiv.hpp"
#include "fracdq/geometry.hpp"
#include "fracdq/linalg.hpp"
#include "fracdq/nodes.hpp"
#include "fracdq/quadrature.hpp"
#include "fracdq/rbf.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace fracdq {

/// DQ weights of one fractional term: row i holds the coefficients that
/// approximate D^alpha_theta u(x_i) by sum_j w_ij u(x_j).
struct WeightMatrix {
    double alpha = 2.0;
    Direction theta{0.0};
    Eigen::MatrixXd entries;

    Eigen::Index size() const noexcept { return entries.rows(); }
};

struct CollocationReport {
    double condition_estimate = 1.0;
    /// max over (i, k) of the collocation residual, relative to the largest
    /// right-hand side entry of node i.
    double max_residual = 0.0;

    bool ill_conditioned() const noexcept { return condition_estimate > kConditionWarning; }
};

struct WeightResult {
    WeightMatrix weights;
    CollocationReport report;
};

/// B(k, j) = phi_k(x_j).
inline Eigen::MatrixXd kernel_matrix(const RbfKind& kind, const NodeSet& nodes) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index j = 0; j < n; ++j) b(k, j) = kind.eval(nodes.points[k], nodes.points[j]);
    return b;
}

namespace detail {

inline void require_distinct(const NodeSet& nodes) {
    if (nodes.size() < 2) {
        throw InvalidInput("DQ weights need at least two nodes");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (distance(nodes.points[i], nodes.points[j]) <= 1e-12) {
                throw InvalidInput("duplicate nodes " + std::to_string(i) + " and " +
                                   std::to_string(j) + " make the collocation matrix singular");
            }
}

// Solves a * x_i = rhs(:, i) for all i with one factorization and packs the
// solutions as rows of the weight matrix.
inline WeightResult solve_collocation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs,
                                      double alpha, const Direction& d) {
    const DenseLu lu(a, "collocation matrix");
    const Eigen::MatrixXd x = lu.solve(rhs);

    const Eigen::MatrixXd resid = a * x - rhs;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < rhs.cols(); ++i) {
        const double scale = std::max(rhs.col(i).cwiseAbs().maxCoeff(), 1e-300);
        worst = std::max(worst, resid.col(i).cwiseAbs().maxCoeff() / scale);
    }
    return {WeightMatrix{alpha, d, x.transpose()}, CollocationReport{lu.condition_estimate(), worst}};
}

}  // namespace detail

/// Weights from the plain kernel interpolant (no polynomial term). The
/// kernel matrix is symmetric positive definite for these kernels.
inline WeightResult weights_imq_ga(const RbfKind& kind, const NodeSet& nodes, const Direction& d,
                                   double alpha, const Domain& domain, const JacobiRule& rule) {
    if (kind.family() == RbfFamily::Multiquadric) {
        throw InvalidInput("weights_imq_ga called with a multiquadric kernel");
    }
    detail::require_distinct(nodes);
    const Eigen::MatrixXd b = kernel_matrix(kind, nodes);
    const Eigen::MatrixXd r = frac_deriv_matrix(kind, nodes, d, alpha, domain, rule);
    return detail::solve_collocation(b, r, alpha, d);
}

/// Multiquadric weights with the constant augmentation: the first equation
/// forces every row to sum to zero, the others collocate phi_k - phi_0.
inline WeightResult weights_mq(const NodeSet& nodes, const Direction& d, double alpha,
                               double epsilon, const Domain& domain, const JacobiRule& rule) {
    const RbfKind kind(RbfFamily::Multiquadric, epsilon);
    detail::require_distinct(nodes);
    const Eigen::MatrixXd b = kernel_matrix(kind, nodes);
    const Eigen::MatrixXd r = frac_deriv_matrix(kind, nodes, d, alpha, domain, rule);
    const Eigen::Index n = b.rows();

    Eigen::MatrixXd a(n, n);
    Eigen::MatrixXd rhs(n, n);
    a.row(0).setOnes();
    rhs.row(0).setZero();
    for (Eigen::Index k = 1; k < n; ++k) {
        a.row(k) = b.row(k) - b.row(0);
        rhs.row(k) = r.row(k) - r.row(0);
    }
    return detail::solve_collocation(a, rhs, alpha, d);
}

/// Dispatches on the kernel family.
inline WeightResult compute_weights(const RbfKind& kind, const NodeSet& nodes, const Direction& d,
                                    double alpha, const Domain& domain, const JacobiRule& rule) {
    if (kind.family() == RbfFamily::Multiquadric) {
        return weights_mq(nodes, d, alpha, kind.epsilon(), domain, rule);
    }
    return weights_imq_ga(kind, nodes, d, alpha, domain, rule);
}

inline Eigen::VectorXd apply(const WeightMatrix& w, std::span<const double> samples) {
    if (static_cast<Eigen::Index>(samples.size()) != w.entries.cols()) {
        throw InvalidInput("apply: " + std::to_string(samples.size()) + " samples for " +
                           std::to_string(w.entries.cols()) + " weight columns");
    }
    const Eigen::Map<const Eigen::VectorXd> u(samples.data(), static_cast<Eigen::Index>(samples.size()));
    return w.entries * u;
}

inline Eigen::VectorXd apply(const WeightMatrix& w, const Eigen::VectorXd& samples) {
    return apply(w, std::span<const double>(samples.data(), static_cast<std::size_t>(samples.size())));
}

/// Largest |sum_j w_ij| relative to the largest |w_ij|.
inline double max_relative_row_sum(const WeightMatrix& w) {
    const double scale = w.entries.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return w.entries.rowwise().sum().cwiseAbs().maxCoeff() / scale;
}

/// Dense dump with header "i,j,weight".
inline void write_weights_csv(std::ostream& os, const WeightMatrix& w) {
    os << "i,j,weight\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < w.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < w.entries.cols(); ++j)
            os << i << ',' << j << ',' << w.entries(i, j) << '\n';
}

}  // namespace fracdq
