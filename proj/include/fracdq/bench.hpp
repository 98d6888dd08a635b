#pragma once

#include "fracdq/dqweights.hpp"
#include "fracdq/error.hpp"
#include "fracdq/geometry.hpp"
#include "fracdq/nodes.hpp"
#include "fracdq/quadrature.hpp"
#include "fracdq/rbf.hpp"
#include "fracdq/stepper.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fracdq {

struct ErrorNorms {
    double e2 = 0.0;    // root mean square over all nodes
    double einf = 0.0;  // max abs over all nodes
};

inline ErrorNorms error_norms(const Eigen::VectorXd& numeric, const Eigen::VectorXd& exact) {
    if (numeric.size() != exact.size()) {
        throw InvalidInput("error_norms: length mismatch");
    }
    if (numeric.size() == 0) return {};
    const Eigen::VectorXd diff = (numeric - exact).cwiseAbs();
    return {std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size())), diff.maxCoeff()};
}

/// Observed order d log2(e1 / e2) / log2(m2 / m1).
inline double conv_rate(double e1, double e2, double m1, double m2, int dim) {
    if (!(e1 > 0.0) || !(e2 > 0.0)) throw InvalidInput("conv_rate needs positive errors");
    if (m1 == m2) throw InvalidInput("conv_rate needs two different sizes");
    if (!(m1 > 0.0) || !(m2 > 0.0)) throw InvalidInput("conv_rate needs positive sizes");
    return dim * std::log2(e1 / e2) / std::log2(m2 / m1);
}

/// Shape parameter c* / (M + 1)^(1/4) used for the 2D examples.
inline double shape_param(double c_star, int M) {
    if (!(c_star > 0.0)) throw InvalidInput("c* must be positive");
    return c_star / std::pow(static_cast<double>(M) + 1.0, 0.25);
}

/// How a case picks its shape parameter for a given M.
struct ShapeRule {
    enum class Kind { Fixed, CStar, Table };
    Kind kind = Kind::Fixed;
    double value = 1.0;
    std::map<int, double> table;  // keyed by M

    static ShapeRule fixed(double eps) { return {Kind::Fixed, eps, {}}; }
    static ShapeRule c_star(double c) { return {Kind::CStar, c, {}}; }
    static ShapeRule by_m(std::map<int, double> t) { return {Kind::Table, 0.0, std::move(t)}; }

    double epsilon_for(int M) const {
        switch (kind) {
            case Kind::Fixed: return value;
            case Kind::CStar: return shape_param(value, M);
            default: {
                const auto it = table.find(M);
                if (it == table.end()) {
                    throw InvalidInput("no tabulated shape parameter for M = " + std::to_string(M) +
                                       "; pass --eps or --cstar");
                }
                return it->second;
            }
        }
    }
};

/// Approximating a fractional derivative of a known function on an interval.
struct DerivativeCase {
    std::string name;
    std::function<double(double)> u;
    std::function<double(double)> exact;
    double a = 0.0;
    double b = 1.0;
    double alpha = 1.2;
    double theta = std::numbers::pi;
    std::map<RbfFamily, ShapeRule> shapes;
    std::vector<int> m_list;
};

/// Time-dependent problem with a manufactured exact solution.
struct BenchmarkCase {
    std::string name;
    std::string description;
    ProblemSpec problem;
    SpaceTimeFn exact;
    RbfFamily default_rbf = RbfFamily::Multiquadric;
    std::map<RbfFamily, ShapeRule> shapes;
    std::vector<std::string> node_specs;    // one per refinement level
    std::function<int(int M)> steps_for_m;  // default N for a given M
    int q = 50;
};

struct DerivativeResult {
    ErrorNorms norms;
    CollocationReport report;
    double row_sum = 0.0;  // max relative row sum of the weights
    int M = 0;
    NodeSet nodes;
    Eigen::VectorXd numeric;
    Eigen::VectorXd exact;
};

struct PdeResult {
    ErrorNorms norms;
    SolveReport solve;
    std::vector<CollocationReport> collocation;
    Eigen::VectorXd exact;
    double max_row_sum = 0.0;  // over the weight matrices, multiquadric only

    double worst_condition() const {
        double c = solve.condition_estimate;
        for (const auto& r : collocation) c = std::max(c, r.condition_estimate);
        return c;
    }
};

// Example problems --------------------------------------------------------

namespace cases {

/// D^alpha_pi (1 - x)^p on [0, 1], exact Gamma(p+1)/Gamma(p+1-alpha) (1-x)^(p-alpha).
inline DerivativeCase power_derivative(double alpha = 1.2, double power = 3.0) {
    DerivativeCase c;
    c.name = "ex51";
    c.alpha = alpha;
    c.theta = std::numbers::pi;
    c.u = [power](double x) { return std::pow(1.0 - x, power); };
    const double factor = std::tgamma(power + 1.0) / std::tgamma(power + 1.0 - alpha);
    c.exact = [=](double x) { return factor * std::pow(std::max(0.0, 1.0 - x), power - alpha); };
    c.shapes = {
        {RbfFamily::Multiquadric, ShapeRule::by_m({{10, 0.3112}, {15, 0.2150}, {20, 0.1678}, {25, 0.1374}})},
        {RbfFamily::InverseMultiquadric,
         ShapeRule::by_m({{10, 0.4327}, {15, 0.3328}, {20, 0.2694}, {25, 0.2255}})},
        {RbfFamily::Gaussian, ShapeRule::by_m({{10, 4.0381}, {15, 5.3768}, {20, 6.6514}, {25, 7.8994}})},
    };
    c.m_list = {10, 15, 20, 25};
    return c;
}

/// 1D diffusion with kappa = x^alpha Gamma(5 - alpha) / 24, u = e^-t x^4.
inline BenchmarkCase interval_power(double alpha = 1.5) {
    BenchmarkCase c;
    c.name = "ex52";
    c.description = "1D, theta = 0, u = exp(-t) x^4";
    c.problem.domain = Domain::interval(0.0, 1.0);
    const double k = std::tgamma(5.0 - alpha) / 24.0;
    c.problem.terms = {{alpha, Direction(0.0), [=](double x, double) { return std::pow(x, alpha) * k; }}};
    c.problem.source = [](double x, double, double t) { return -2.0 * std::exp(-t) * std::pow(x, 4); };
    c.exact = [](double x, double, double t) { return std::exp(-t) * std::pow(x, 4); };
    c.problem.initial = [](double x, double) { return std::pow(x, 4); };
    c.problem.boundary = c.exact;
    c.problem.horizon = 1.0;
    c.default_rbf = RbfFamily::Multiquadric;
    c.shapes = {
        {RbfFamily::Multiquadric, ShapeRule::by_m({{15, 0.1875}, {20, 0.1128}, {25, 0.0712}, {30, 0.0613}, {40, 0.0312}})},
        {RbfFamily::InverseMultiquadric,
         ShapeRule::by_m({{15, 0.3098}, {20, 0.2135}, {25, 0.1567}, {30, 0.1149}, {40, 0.0511}})},
    };
    c.node_specs = {"cheb:15", "cheb:20", "cheb:25", "cheb:30"};
    c.steps_for_m = [](int M) { return M; };
    return c;
}

/// Two-term problem on the unit square, u = e^-t x^3 y^3.6.
inline BenchmarkCase square_two_term() {
    BenchmarkCase c;
    c.name = "ex53i";
    c.description = "unit square, theta = 0 and pi/2, u = exp(-t) x^3 y^3.6";
    c.problem.domain = Domain::unit_square();
    const double g22 = std::tgamma(2.2);
    const double g46 = std::tgamma(4.6);
    c.problem.terms = {
        {1.8, Direction(0.0), [=](double x, double y) { return g22 * std::pow(x, 2.8) * y / 6.0; }},
        {1.6, Direction(0.5 * std::numbers::pi),
         [=](double x, double y) { return 2.0 * x * std::pow(y, 2.6) / g46; }},
    };
    c.exact = [](double x, double y, double t) { return std::exp(-t) * std::pow(x, 3) * std::pow(y, 3.6); };
    c.problem.source = [](double x, double y, double t) {
        return -std::exp(-t) * (1.0 + 2.0 * x * y) * std::pow(x, 3) * std::pow(y, 3.6);
    };
    c.problem.initial = [](double x, double y) { return std::pow(x, 3) * std::pow(y, 3.6); };
    c.problem.boundary = c.exact;
    c.default_rbf = RbfFamily::Multiquadric;
    c.shapes = {{RbfFamily::Multiquadric, ShapeRule::c_star(0.98)},
                {RbfFamily::InverseMultiquadric, ShapeRule::c_star(1.22)}};
    c.node_specs = {"grid:100", "grid:196", "grid:289", "grid:441"};
    c.steps_for_m = [](int M) {
        return std::max(1, static_cast<int>(std::lround(std::sqrt(M + 1.0))) - 1);
    };
    return c;
}

/// Derivative of x^2 y^2 along theta = pi/4 on a domain where the backward
/// ray always exits through x = 0 or y = 0.
inline double diagonal_derivative_xy2(double alpha, double x, double y) {
    const double pre = std::pow(2.0, 1.0 - 0.5 * alpha) / std::tgamma(5.0 - alpha);
    if (x >= y) {
        return pre * std::pow(y, 2.0 - alpha) *
               ((alpha - 4) * (alpha - 3) * x * x - 2 * (alpha - 4) * alpha * x * y + (alpha - 1) * alpha * y * y);
    }
    return pre * std::pow(x, 2.0 - alpha) *
           ((alpha - 1) * alpha * x * x - 2 * (alpha - 4) * alpha * x * y + (alpha - 4) * (alpha - 3) * y * y);
}

/// Oblique direction on the unit square, u = e^-t x^2 y^2.
inline BenchmarkCase square_oblique(double alpha = 1.8) {
    BenchmarkCase c;
    c.name = "ex53ii";
    c.description = "unit square, theta = pi/4, u = exp(-t) x^2 y^2";
    c.problem.domain = Domain::unit_square();
    c.problem.terms = {{alpha, Direction(0.25 * std::numbers::pi),
                        [=](double x, double) { return std::pow(x, alpha); }}};
    c.exact = [](double x, double y, double t) { return std::exp(-t) * x * x * y * y; };
    c.problem.source = [=](double x, double y, double t) {
        return -std::exp(-t) * x * x * y * y -
               std::exp(-t) * std::pow(x, alpha) * diagonal_derivative_xy2(alpha, x, y);
    };
    c.problem.initial = [](double x, double y) { return x * x * y * y; };
    c.problem.boundary = c.exact;
    c.default_rbf = RbfFamily::Multiquadric;
    c.shapes = {{RbfFamily::Multiquadric, ShapeRule::c_star(0.89)},
                {RbfFamily::InverseMultiquadric, ShapeRule::c_star(1.25)}};
    c.node_specs = {"scatter:74:seed=1", "scatter:144:seed=1", "scatter:234:seed=1", "scatter:424:seed=1"};
    c.steps_for_m = [](int) { return 2000; };
    return c;
}

inline double trapezoid_left_term(double alpha, double x, double y) {
    return 0.75 * std::pow(x, 3) * std::pow(y, 3) / std::tgamma(4 - alpha) -
           18.0 * std::pow(x, 4) * y * y / std::tgamma(5 - alpha) +
           180.0 * std::pow(x, 5) * y / std::tgamma(6 - alpha) - 720.0 * std::pow(x, 6) / std::tgamma(7 - alpha);
}

inline double trapezoid_right_term(double alpha, double x, double y) {
    return (0.75 * (alpha - 2) * (alpha - 1) * alpha * std::pow(y, 3) + 18.0 * (alpha - 1) * alpha * x * y * y +
            180.0 * alpha * x * x * y + 720.0 * std::pow(x, 3)) /
           std::tgamma(7 - alpha);
}

/// Left and right derivatives on the trapezoid, u = e^-t x^3 (1.5 - 0.5 y - x)^3.
inline BenchmarkCase trapezoid_two_sided(double alpha1 = 1.1, double alpha2 = 1.3) {
    BenchmarkCase c;
    c.name = "ex54";
    c.description = "trapezoid, theta = 0 and pi, u = exp(-t) x^3 (0.5 (3 - y) - x)^3";
    c.problem.domain = Domain::trapezoid();
    c.problem.terms = {
        {alpha1, Direction(0.0), [=](double x, double) { return std::pow(x, alpha1); }},
        {alpha2, Direction(std::numbers::pi),
         [=](double x, double y) { return std::pow(1.5 - x - 0.5 * y, alpha2 - 3.0); }},
    };
    auto shape = [](double x, double y) { return std::pow(x, 3) * std::pow(0.5 * (3.0 - y) - x, 3); };
    c.exact = [=](double x, double y, double t) { return std::exp(-t) * shape(x, y); };
    c.problem.source = [=](double x, double y, double t) {
        return -std::exp(-t) * shape(x, y) -
               std::exp(-t) * (trapezoid_left_term(alpha1, x, 3.0 - y) + trapezoid_right_term(alpha2, x, y - 3.0));
    };
    c.problem.initial = [=](double x, double y) { return shape(x, y); };
    c.problem.boundary = c.exact;
    c.default_rbf = RbfFamily::Multiquadric;
    c.shapes = {{RbfFamily::Multiquadric, ShapeRule::c_star(0.75)},
                {RbfFamily::InverseMultiquadric, ShapeRule::c_star(1.05)}};
    c.node_specs = {"scatter:66:seed=1", "scatter:171:seed=1", "scatter:287:seed=1", "scatter:437:seed=1"};
    c.steps_for_m = [](int) { return 5000; };
    return c;
}

/// Disk of radius 0.5, theta = 0, u = t^2 (x - x_left(y))^2 y^2.
inline BenchmarkCase disk(double alpha = 1.9) {
    BenchmarkCase c;
    c.name = "ex55";
    c.description = "disk, theta = 0, u = t^2 (x - 0.5 + sqrt(0.25 - (y - 0.5)^2))^2 y^2";
    c.problem.domain = Domain::unit_disk();
    c.problem.terms = {{alpha, Direction(0.0), [=](double, double y) { return 0.5 * std::pow(y, alpha); }}};
    auto chord = [](double x, double y) {
        return std::max(0.0, x - 0.5 + std::sqrt(std::max(0.0, 0.25 - (y - 0.5) * (y - 0.5))));
    };
    c.exact = [=](double x, double y, double t) { return t * t * std::pow(chord(x, y), 2) * y * y; };
    c.problem.source = [=](double x, double y, double t) {
        const double w = chord(x, y);
        return 2.0 * t * w * w * y * y -
               t * t * std::pow(w, 2.0 - alpha) * std::pow(y, 2.0 + alpha) / std::tgamma(3.0 - alpha);
    };
    c.problem.initial = [=](double x, double y) { return c.exact(x, y, 0.0); };
    c.problem.boundary = c.exact;
    c.default_rbf = RbfFamily::InverseMultiquadric;
    c.shapes = {{RbfFamily::InverseMultiquadric, ShapeRule::c_star(0.85)},
                {RbfFamily::Gaussian, ShapeRule::by_m({{53, 5.4216}, {79, 5.9814}, {200, 7.5306}, {401, 8.9554}})}};
    c.node_specs = {"scatter:54:seed=1", "scatter:80:seed=1", "scatter:201:seed=1", "scatter:402:seed=1"};
    c.steps_for_m = [](int) { return 5000; };
    return c;
}

/// Three directions (0, pi/4, pi/2) on the L-shaped domain, u = t^3 x^2 y^2.
inline BenchmarkCase l_shape(double alpha = 1.5) {
    BenchmarkCase c;
    c.name = "ex56";
    c.description = "L-shape, theta = 0, pi/4, pi/2, u = t^3 x^2 y^2";
    c.problem.domain = Domain::l_shape();
    const SpaceFn kappa = [=](double x, double y) { return std::pow(x, alpha) * std::pow(y, alpha); };
    for (double th : {0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi}) {
        c.problem.terms.push_back({alpha, Direction(th), kappa});
    }
    c.exact = [](double x, double y, double t) { return t * t * t * x * x * y * y; };
    c.problem.source = [=](double x, double y, double t) {
        const double axis = 2.0 * (std::pow(x, 2.0 - alpha) * y * y + x * x * std::pow(y, 2.0 - alpha)) /
                            std::tgamma(3.0 - alpha);
        return 3.0 * t * t * x * x * y * y -
               t * t * t * std::pow(x, alpha) * std::pow(y, alpha) * (diagonal_derivative_xy2(alpha, x, y) + axis);
    };
    c.problem.initial = [](double, double) { return 0.0; };
    c.problem.boundary = c.exact;
    c.problem.horizon = 0.5;
    c.default_rbf = RbfFamily::Multiquadric;
    c.shapes = {{RbfFamily::Multiquadric, ShapeRule::fixed(0.2128)},
                {RbfFamily::InverseMultiquadric, ShapeRule::fixed(0.3445)},
                {RbfFamily::Gaussian, ShapeRule::fixed(4.6880)}};
    c.node_specs = {"scatter:593:seed=1"};
    c.steps_for_m = [](int) { return 1000; };
    return c;
}

}  // namespace cases

/// Catalog lookup by name. `alpha` overrides the default order of the
/// single-order cases when given.
inline BenchmarkCase catalog_case(const std::string& name, std::optional<double> alpha = {}) {
    if (name == "ex52") return cases::interval_power(alpha.value_or(1.5));
    if (name == "ex53i") return cases::square_two_term();
    if (name == "ex53ii") return cases::square_oblique(alpha.value_or(1.8));
    if (name == "ex54") return cases::trapezoid_two_sided();
    if (name == "ex55") return cases::disk(alpha.value_or(1.9));
    if (name == "ex56") return cases::l_shape(alpha.value_or(1.5));
    throw InvalidInput("unknown case '" + name + "' (expected ex51, ex52, ex53i, ex53ii, ex54, ex55 or ex56)");
}

inline std::vector<std::string> catalog_names() {
    return {"ex51", "ex52", "ex53i", "ex53ii", "ex54", "ex55", "ex56"};
}

/// Size used by conv_rate: M in 1D, the node count M + 1 in 2D.
inline double convergence_size(const Domain& domain, int M) {
    return domain.is_1d() ? static_cast<double>(M) : static_cast<double>(M) + 1.0;
}

inline DerivativeResult run_derivative_case(const DerivativeCase& c, const RbfKind& kind, int M, int q = 50) {
    const Domain domain = Domain::interval(c.a, c.b);
    const NodeSet nodes = chebyshev_1d(c.a, c.b, M);
    const Direction d(c.theta);
    const auto rule = cached_gauss_jacobi(c.alpha, q);
    const WeightResult w = compute_weights(kind, nodes, d, c.alpha, domain, *rule);

    Eigen::VectorXd samples(nodes.size());
    Eigen::VectorXd exact(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        samples(j) = c.u(nodes.points[j].x);
        exact(j) = c.exact(nodes.points[j].x);
    }
    DerivativeResult out;
    out.numeric = apply(w.weights, samples);
    out.norms = error_norms(out.numeric, exact);
    out.report = w.report;
    out.row_sum = max_relative_row_sum(w.weights);
    out.M = M;
    out.nodes = nodes;
    out.exact = std::move(exact);
    return out;
}

/// Weights for every term, built on the same nodes and kernel.
inline std::vector<WeightResult> term_weights(const ProblemSpec& problem, const RbfKind& kind,
                                              const NodeSet& nodes, int q) {
    std::vector<WeightResult> out;
    for (const auto& term : problem.terms) {
        const auto rule = cached_gauss_jacobi(term.alpha, q);
        out.push_back(compute_weights(kind, nodes, term.theta, term.alpha, problem.domain, *rule));
    }
    return out;
}

inline PdeResult run_pde_case(const BenchmarkCase& c, const RbfKind& kind, const NodeSet& nodes, int n_steps,
                              int q = 50, SnapshotPolicy capture = {}) {
    const auto start = std::chrono::steady_clock::now();
    PdeResult out;
    std::vector<WeightMatrix> weights;
    for (auto& w : term_weights(c.problem, kind, nodes, q)) {
        out.collocation.push_back(w.report);
        if (kind.family() == RbfFamily::Multiquadric) {
            out.max_row_sum = std::max(out.max_row_sum, max_relative_row_sum(w.weights));
        }
        weights.push_back(std::move(w.weights));
    }
    const TimeGrid grid(c.problem.horizon, n_steps);
    out.solve = advance(c.problem, nodes, weights, grid, capture);
    out.exact.resize(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out.exact(j) = c.exact(nodes.points[j].x, nodes.points[j].y, c.problem.horizon);
    }
    out.norms = error_norms(out.solve.final_solution, out.exact);
    out.solve.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Per-node dump with header "x,y,exact,numeric,abs_err".
inline void write_solution_csv(std::ostream& os, const NodeSet& nodes, const Eigen::VectorXd& exact,
                               const Eigen::VectorXd& numeric) {
    os << "x,y,exact,numeric,abs_err\n" << std::setprecision(17);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(j);
        os << nodes.points[j].x << ',' << nodes.points[j].y << ',' << exact(i) << ',' << numeric(i) << ','
           << std::abs(numeric(i) - exact(i)) << '\n';
    }
}

/// One row of the results table.
struct ResultRow {
    std::string case_name;
    std::string rbf;
    int M = 0;
    int N = 0;
    int Q = 50;
    double epsilon = 0.0;
    double e2 = 0.0;
    double einf = 0.0;
    std::optional<double> rate;  // empty on the first row of a study
    double wall_ms = 0.0;
    double cond = 0.0;
};

inline constexpr const char* kResultsHeader = "case,rbf,M,N,Q,epsilon,e2,einf,rate,wall_ms,cond";

inline void write_result_row(std::ostream& os, const ResultRow& r) {
    os << std::setprecision(17) << r.case_name << ',' << r.rbf << ',' << r.M << ',' << r.N << ',' << r.Q << ','
       << r.epsilon << ',' << r.e2 << ',' << r.einf << ',';
    if (r.rate) os << *r.rate;
    os << ',' << r.wall_ms << ',' << r.cond << '\n';
}

inline ResultRow parse_result_row(const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            f.push_back(cur);
            cur.clear();
        } else if (ch != '\r' && ch != '\n') {
            cur += ch;
        }
    }
    f.push_back(cur);
    if (f.size() != 11) throw ParseError("expected 11 fields in results row, got " + std::to_string(f.size()), 0);
    try {
        ResultRow r;
        r.case_name = f[0];
        r.rbf = f[1];
        r.M = std::stoi(f[2]);
        r.N = std::stoi(f[3]);
        r.Q = std::stoi(f[4]);
        r.epsilon = std::stod(f[5]);
        r.e2 = std::stod(f[6]);
        r.einf = std::stod(f[7]);
        if (!f[8].empty()) r.rate = std::stod(f[8]);
        r.wall_ms = std::stod(f[9]);
        r.cond = std::stod(f[10]);
        return r;
    } catch (const std::logic_error&) {
        throw ParseError("malformed number in results row", 0);
    }
}

}  // namespace fracdq
