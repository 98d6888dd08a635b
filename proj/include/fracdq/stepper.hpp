#pragma once

#include "fracdq/dqweights.hpp"
#include "fracdq/error.hpp"
#include "fracdq/geometry.hpp"
#include "fracdq/linalg.hpp"
#include "fracdq/nodes.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fracdq {

using SpaceFn = std::function<double(double x, double y)>;
using SpaceTimeFn = std::function<double(double x, double y, double t)>;

/// One term kappa(x, y) D^alpha_theta u of the operator.
struct FractionalTerm {
    double alpha = 2.0;
    Direction theta{0.0};
    SpaceFn kappa;
};

/// du/dt - sum_l kappa_l D^alpha_l_theta_l u = f on the domain, u = g on the
/// boundary, u = u0 at t = 0.
struct ProblemSpec {
    Domain domain = Domain::unit_square();
    std::vector<FractionalTerm> terms;
    SpaceTimeFn source;
    SpaceFn initial;
    SpaceTimeFn boundary;
    double horizon = 1.0;
};

class TimeGrid {
public:
    TimeGrid(double horizon, int n_steps) : n_steps_(n_steps), horizon_(horizon) {
        if (n_steps < 1) throw InvalidInput("time grid needs at least one step");
        if (!(horizon > 0.0)) throw InvalidInput("time horizon must be positive");
        tau_ = horizon / n_steps;
    }

    int n_steps() const noexcept { return n_steps_; }
    double tau() const noexcept { return tau_; }
    double horizon() const noexcept { return horizon_; }
    double time(int n) const noexcept { return n == n_steps_ ? horizon_ : n * tau_; }

private:
    int n_steps_;
    double horizon_;
    double tau_ = 0.0;
};

/// Restriction of the scheme to the interior unknowns.
struct CnSystem {
    Eigen::MatrixXd left;   // I - tau/2 sum_l kappa_l K_l
    Eigen::MatrixXd right;  // I + tau/2 sum_l kappa_l K_l
    std::vector<Eigen::MatrixXd> boundary_blocks;  // G_l = W_l(interior, boundary)
    Eigen::MatrixXd kappa_boundary;                // sum_l diag(kappa_l) G_l
    Eigen::VectorXd kappa_check;                   // sum_l kappa_l at interior nodes
};

struct SnapshotPolicy {
    /// Keep every `stride`-th step (0 keeps only the final state).
    int stride = 0;
};

struct SolveReport {
    Eigen::VectorXd final_solution;
    std::vector<std::pair<double, Eigen::VectorXd>> snapshots;
    double wall_time = 0.0;
    double condition_estimate = 1.0;
};

namespace detail {

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    return out;
}

}  // namespace detail

inline CnSystem build_system(const ProblemSpec& problem, const NodeSet& nodes,
                             const std::vector<WeightMatrix>& weights, const TimeGrid& grid) {
    if (problem.terms.empty()) {
        throw InvalidInput("problem needs at least one fractional term");
    }
    if (weights.size() != problem.terms.size()) {
        throw InvalidInput("expected one weight matrix per fractional term");
    }
    const auto n = static_cast<Eigen::Index>(nodes.size());
    const auto& in = nodes.interior_idx;
    const auto& bd = nodes.boundary_idx;
    const auto ni = static_cast<Eigen::Index>(in.size());

    CnSystem sys;
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(ni, ni);
    sys.kappa_boundary = Eigen::MatrixXd::Zero(ni, static_cast<Eigen::Index>(bd.size()));
    sys.kappa_check = Eigen::VectorXd::Zero(ni);
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const auto& term = problem.terms[l];
        const auto& w = weights[l];
        if (w.entries.rows() != n || w.entries.cols() != n) {
            throw InvalidInput("weight matrix " + std::to_string(l) + " does not match the node count");
        }
        if (w.alpha != term.alpha || w.theta.theta() != term.theta.theta()) {
            throw InvalidInput("weight matrix " + std::to_string(l) +
                               " was built for a different (alpha, theta)");
        }
        Eigen::VectorXd kappa(ni);
        for (Eigen::Index r = 0; r < ni; ++r) {
            const Point2 p = nodes.points[in[r]];
            kappa(r) = term.kappa(p.x, p.y);
            if (!(kappa(r) >= 0.0) || !std::isfinite(kappa(r))) {
                throw InvalidInput("diffusivity of term " + std::to_string(l) +
                                   " is negative or not finite at interior node " +
                                   std::to_string(in[r]));
            }
        }
        sys.kappa_check += kappa;
        op += kappa.asDiagonal() * detail::submatrix(w.entries, in, in);
        sys.boundary_blocks.push_back(detail::submatrix(w.entries, in, bd));
        sys.kappa_boundary += kappa.asDiagonal() * sys.boundary_blocks.back();
    }
    if (ni > 0 && sys.kappa_check.cwiseAbs().maxCoeff() == 0.0) {
        throw InvalidInput("all diffusivities vanish at the interior nodes");
    }
    const Eigen::MatrixXd scaled = (0.5 * grid.tau()) * op;
    sys.left = -scaled;
    sys.right = scaled;
    sys.left.diagonal().array() += 1.0;
    sys.right.diagonal().array() += 1.0;
    return sys;
}

/// Crank-Nicolson time loop on the interior unknowns. The source is sampled
/// at t_n - tau/2; boundary values are assigned from g at every level.
inline SolveReport advance(const ProblemSpec& problem, const NodeSet& nodes,
                           const std::vector<WeightMatrix>& weights, const TimeGrid& grid,
                           SnapshotPolicy capture = {}) {
    const auto start = std::chrono::steady_clock::now();
    const CnSystem sys = build_system(problem, nodes, weights, grid);
    const auto& in = nodes.interior_idx;
    const auto& bd = nodes.boundary_idx;
    const auto n = static_cast<Eigen::Index>(nodes.size());
    const auto ni = static_cast<Eigen::Index>(in.size());
    const auto nb = static_cast<Eigen::Index>(bd.size());

    SolveReport report;
    DenseLu lu;
    if (ni > 0) {
        try {
            lu = DenseLu(sys.left, "Crank-Nicolson matrix");
        } catch (const SingularMatrixError& e) {
            throw SingularMatrixError(std::string(e.what()) +
                                          "; try a smaller time step or another shape parameter",
                                      e.condition());
        }
        report.condition_estimate = lu.condition_estimate();
    }

    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u(i) = problem.initial(nodes.points[i].x, nodes.points[i].y);
    }
    auto boundary_values = [&](double t) {
        Eigen::VectorXd g(nb);
        for (Eigen::Index p = 0; p < nb; ++p) {
            const Point2 q = nodes.points[bd[p]];
            g(p) = problem.boundary(q.x, q.y, t);
        }
        return g;
    };

    const double tau = grid.tau();
    Eigen::VectorXd g_prev = boundary_values(0.0);
    Eigen::VectorXd interior(ni);
    for (Eigen::Index r = 0; r < ni; ++r) interior(r) = u(in[r]);
    if (capture.stride > 0) report.snapshots.emplace_back(0.0, u);

    Eigen::VectorXd h(ni);
    for (int step = 1; step <= grid.n_steps(); ++step) {
        const double t = grid.time(step);
        const double t_mid = t - 0.5 * tau;
        const Eigen::VectorXd g_now = boundary_values(t);
        for (Eigen::Index r = 0; r < ni; ++r) {
            const Point2 q = nodes.points[in[r]];
            h(r) = problem.source(q.x, q.y, t_mid);
        }
        if (nb > 0) h += 0.5 * sys.kappa_boundary * (g_now + g_prev);
        if (ni > 0) interior = lu.solve(sys.right * interior + tau * h);

        for (Eigen::Index r = 0; r < ni; ++r) u(in[r]) = interior(r);
        for (Eigen::Index p = 0; p < nb; ++p) u(bd[p]) = g_now(p);
        g_prev = g_now;
        if (capture.stride > 0 && step % capture.stride == 0) report.snapshots.emplace_back(t, u);
    }
    report.final_solution = u;
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace fracdq
