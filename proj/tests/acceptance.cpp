// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "fracdq/fracdq.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fracdq;

namespace {

constexpr double pi = std::numbers::pi;
const RbfFamily kFamilies[] = {RbfFamily::Multiquadric, RbfFamily::InverseMultiquadric, RbfFamily::Gaussian};

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

int failures = 0;

void report(const std::string& label, const std::function<void(Verdict&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s: %s (%.1f s)%s%s\n", label.c_str(), v.pass ? "PASS" : "FAIL", secs,
                v.detail.str().empty() ? "" : " ", v.detail.str().c_str());
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", x);
    return buf;
}

bool within(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

// Reconstruction residual recomputed from the kernel definitions.
double reconstruction_residual(const RbfKind& kind, const NodeSet& nodes, const WeightMatrix& w, const Domain& domain,
                               const JacobiRule& rule) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    const bool mq = kind.family() == RbfFamily::Multiquadric;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto d = frac_deriv_vector(kind, nodes, static_cast<std::size_t>(i), w.theta, w.alpha, domain, rule);
        double scale = 0.0;
        for (double v : d) scale = std::max(scale, std::abs(v));
        for (Eigen::Index k = 0; k < n; ++k) {
            double sum = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                double phi = kind.eval(nodes.points[k], nodes.points[j]);
                if (mq) phi -= kind.eval(nodes.points[0], nodes.points[j]);
                sum += w.entries(i, j) * phi;
            }
            worst = std::max(worst, std::abs(sum - (mq ? d[k] - d[0] : d[k])) / scale);
        }
        if (mq) worst = std::max(worst, std::abs(w.entries.row(i).sum()) / w.entries.row(i).cwiseAbs().maxCoeff());
    }
    return worst;
}

double kernel_value(RbfFamily fam, double eps, double rx, double ry) {
    if (fam == RbfFamily::Multiquadric) return oracle::mq(rx, ry, eps);
    if (fam == RbfFamily::InverseMultiquadric) return oracle::imq(rx, ry, eps);
    return oracle::ga(rx, ry, eps);
}

void criterion1(Verdict& v) {
    const DerivativeCase c = cases::power_derivative(1.2, 3.0);
    const std::map<RbfFamily, std::vector<double>> table = {
        {RbfFamily::Multiquadric, {2.5459e-2, 9.8161e-3, 4.8985e-3, 2.8489e-3}},
        {RbfFamily::InverseMultiquadric, {3.8207e-2, 1.1916e-2, 6.1154e-3, 3.5079e-3}},
        {RbfFamily::Gaussian, {9.3444e-2, 3.2316e-2, 1.6083e-2, 9.5893e-3}},
    };
    double worst = 0.0;
    for (const auto& [fam, want] : table) {
        for (std::size_t i = 0; i < c.m_list.size(); ++i) {
            const int M = c.m_list[i];
            const auto r = run_derivative_case(c, RbfKind(fam, c.shapes.at(fam).epsilon_for(M)), M);
            worst = std::max(worst, std::abs(r.norms.e2 - want[i]) / want[i]);
            v.require(within(r.norms.e2, want[i], 0.02),
                      std::string(short_name(fam)) + " M=" + std::to_string(M) + " e2 " + fmt(r.norms.e2));
        }
    }
    v.detail << "max relative deviation " << fmt(worst);
}

void criterion2(Verdict& v) {
    const BenchmarkCase c = cases::interval_power(1.5);
    const std::vector<int> ms = {15, 20, 25, 30};
    const double mq_want[] = {2.5379e-4, 1.3366e-4, 8.2231e-5, 5.5969e-5};
    const double rate_want[] = {2.2288, 2.1770, 2.1102};
    const double imq_want[] = {2.9346e-4, 1.5818e-4, 9.8308e-5, 6.6635e-5};
    std::vector<double> mq_err;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const int M = ms[i];
        const NodeSet nodes = chebyshev_1d(0, 1, M);
        const auto mq = run_pde_case(
            c, RbfKind(RbfFamily::Multiquadric, c.shapes.at(RbfFamily::Multiquadric).epsilon_for(M)), nodes, M);
        const auto imq = run_pde_case(
            c, RbfKind(RbfFamily::InverseMultiquadric, c.shapes.at(RbfFamily::InverseMultiquadric).epsilon_for(M)),
            nodes, M);
        mq_err.push_back(mq.norms.einf);
        v.require(within(mq.norms.einf, mq_want[i], 0.05), "MQ M=" + std::to_string(M) + " einf " + fmt(mq.norms.einf));
        v.require(within(imq.norms.einf, imq_want[i], 0.10),
                  "IMQ M=" + std::to_string(M) + " einf " + fmt(imq.norms.einf));
    }
    std::ostringstream rates;
    for (std::size_t i = 1; i < ms.size(); ++i) {
        const double r = conv_rate(mq_err[i - 1], mq_err[i], ms[i - 1], ms[i], 1);
        rates << (i > 1 ? " " : "") << std::fixed << std::setprecision(4) << r;
        v.require(std::abs(r - rate_want[i - 1]) <= 0.15, "rate " + std::to_string(r));
    }
    v.detail << "MQ rates " << rates.str();
}

void criterion3(Verdict& v) {
    const double r = conv_rate(2.5379e-4, 1.3366e-4, 15, 20, 1);
    // Agreement to four decimals: the published value truncates 2.22888.
    v.require(std::abs(r - 2.2288) < 1e-4, "got " + std::to_string(r));
    v.detail << "rate " << std::setprecision(6) << r;
}

void criterion4(Verdict& v) {
    double worst = 0.0;
    int configs = 0;
    auto check = [&](const WeightMatrix& w, const std::string& what) {
        const double s = max_relative_row_sum(w);
        worst = std::max(worst, s);
        ++configs;
        v.require(s <= 1e-8, what + " row sum " + fmt(s));
    };
    const DerivativeCase d = cases::power_derivative();
    for (int M : d.m_list) {
        const auto r = run_derivative_case(d, RbfKind(RbfFamily::Multiquadric, d.shapes.at(RbfFamily::Multiquadric).epsilon_for(M)), M);
        worst = std::max(worst, r.row_sum);
        ++configs;
        v.require(r.row_sum <= 1e-8, "ex51 M=" + std::to_string(M));
    }
    std::vector<std::pair<BenchmarkCase, std::vector<std::string>>> pde;
    BenchmarkCase ex52 = cases::interval_power();
    pde.push_back({ex52, {"cheb:15", "cheb:20", "cheb:25", "cheb:30", "cheb:40"}});
    for (const char* name : {"ex53i", "ex53ii", "ex54"}) {
        const BenchmarkCase c = catalog_case(name);
        pde.push_back({c, c.node_specs});
    }
    for (double a : {1.2, 1.5, 1.8, 2.0}) {
        const BenchmarkCase c = cases::l_shape(a);
        pde.push_back({c, c.node_specs});
    }
    for (const auto& [c, specs] : pde) {
        for (const auto& spec : specs) {
            NodeSet nodes;
            if (spec.rfind("cheb:", 0) == 0) {
                nodes = chebyshev_1d(0, 1, std::stoi(spec.substr(5)));
            } else if (spec.rfind("grid:", 0) == 0) {
                nodes = grid_2d(c.problem.domain, std::stoi(spec.substr(5)));
            } else {
                nodes = scattered_2d(c.problem.domain, std::stoi(spec.substr(8)), 1);
            }
            const int M = static_cast<int>(nodes.size()) - 1;
            const RbfKind k(RbfFamily::Multiquadric, c.shapes.at(RbfFamily::Multiquadric).epsilon_for(M));
            for (const auto& w : term_weights(c.problem, k, nodes, c.q)) check(w.weights, c.name + " " + spec);
        }
    }
    v.detail << configs << " weight matrices, worst " << fmt(worst);
}

void criterion5(Verdict& v) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int total = 0;
    int skipped = 0;
    for (RbfFamily fam : kFamilies) {
        int done = 0;
        while (done < 20) {
            const bool one_d = done < 10;
            const double alpha = 1.05 + 0.95 * u(rng);
            const double a = std::min(alpha, 2.0);
            Domain domain = Domain::interval(0, 1);
            NodeSet nodes;
            Direction dir(0.0);
            if (one_d) {
                nodes = chebyshev_1d(0, 1, 6 + static_cast<int>(10 * u(rng)));
                dir = Direction(u(rng) < 0.5 ? 0.0 : pi);
            } else {
                domain = u(rng) < 0.5 ? Domain::unit_square() : Domain::unit_disk();
                nodes = scattered_2d(domain, 20 + static_cast<int>(20 * u(rng)), 1 + static_cast<std::uint64_t>(100 * u(rng)));
                dir = Direction(2 * pi * u(rng));
            }
            const double h = 1.0 / std::sqrt(static_cast<double>(nodes.size()));
            const double eps = fam == RbfFamily::Gaussian ? (1.0 + 2.0 * u(rng)) / h : (0.5 + 1.0 * u(rng)) * h;
            const RbfKind k(fam, eps);
            const auto rule = gauss_jacobi(a, 50);
            const WeightResult w = compute_weights(k, nodes, dir, a, domain, rule);
            if (w.report.condition_estimate > 1e10) {
                ++skipped;
                continue;
            }
            const double r = reconstruction_residual(k, nodes, w.weights, domain, rule);
            worst = std::max(worst, r);
            v.require(r <= 1e-6, std::string(short_name(fam)) + " residual " + fmt(r));
            ++done;
            ++total;
        }
    }
    v.detail << total << " configurations (" << skipped << " ill-conditioned draws redrawn), worst " << fmt(worst);
}

void criterion6(Verdict& v) {
    double worst_moment = 0.0;
    double worst_poly = 0.0;
    for (double alpha : {1.2, 1.5, 1.9, 2.0}) {
        // alpha = 2 has no singular factor: the rule is Gauss-Legendre.
        const double b = alpha == 2.0 ? 0.0 : 1.0 - alpha;
        const double m0 = std::pow(2.0, b + 1.0) / (b + 1.0);
        for (int q = 1; q <= 10; ++q) {
            const JacobiRule r = gauss_jacobi(alpha, q);
            double s0 = 0.0;
            for (double w : r.weights) s0 += w;
            const double dm = std::abs(s0 - m0) / m0;
            worst_moment = std::isnan(dm) ? dm : std::max(worst_moment, dm);
            for (int k = 0; k <= 2 * q - 1; ++k) {
                double s = 0.0;
                double mag = 0.0;
                for (std::size_t j = 0; j < r.size(); ++j) {
                    s += r.weights[j] * std::pow(r.points[j], k);
                    mag += std::abs(r.weights[j] * std::pow(r.points[j], k));
                }
                const double m = oracle::jacobi_moment(k, b);
                const double den = std::max(std::abs(m), mag);  // both vanish for an odd moment at a single node 0
                const double dp = den > 0.0 ? std::abs(s - m) / den : std::abs(s - m);
                worst_poly = std::isnan(dp) ? dp : std::max(worst_poly, dp);
            }
        }
    }
    v.require(std::isfinite(worst_moment) && std::isfinite(worst_poly), "non-finite error");
    v.require(worst_moment <= 1e-12, "zeroth moment " + fmt(worst_moment));
    v.require(worst_poly <= 1e-11, "polynomial exactness " + fmt(worst_poly));
    v.detail << "moment " << fmt(worst_moment) << ", exactness " << fmt(worst_poly);
}

void criterion7(Verdict& v) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Domain sq = Domain::unit_square();
    double worst = 0.0;
    int n = 0;
    for (RbfFamily fam : kFamilies) {
        for (int i = 0; i < 20; ++i) {
            const double alpha = 1.05 + 0.9 * u(rng);
            const double eps = fam == RbfFamily::Gaussian ? 1.0 + 4.0 * u(rng) : 0.2 + 0.8 * u(rng);
            const Point2 c{u(rng), u(rng)};
            const Point2 node{0.05 + 0.9 * u(rng), 0.05 + 0.9 * u(rng)};
            const double th = 2 * pi * u(rng);
            const Direction d(th);
            const double z = boundary_distance(sq, node, d);
            const RbfKind k(fam, eps);
            const double got = frac_dir_deriv(k, c, node, d, alpha, z, *cached_gauss_jacobi(alpha, 50));
            auto second = [&](double w) {
                auto f = [&](auto x, auto y) {
                    const auto rx = x - c.x;
                    const auto ry = y - c.y;
                    if (fam == RbfFamily::Multiquadric) return oracle::mq(rx, ry, eps);
                    if (fam == RbfFamily::InverseMultiquadric) return oracle::imq(rx, ry, eps);
                    return oracle::ga(rx, ry, eps);
                };
                return oracle::ray_second_derivative(f, node.x, node.y, d.cos(), d.sin(), w);
            };
            const double ref = oracle::caputo(second, alpha, z);
            const double rel = std::abs(got - ref) / std::max(std::abs(ref), 1e-3 * k.curvature_scale());
            worst = std::max(worst, rel);
            v.require(rel <= 1e-8, std::string(short_name(fam)) + " case " + std::to_string(i) + " " + fmt(rel));
            ++n;
        }
    }
    v.detail << n << " cases, worst " << fmt(worst);
}

void criterion8(Verdict& v) {
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-4;
    double worst = 0.0;
    int n = 0;
    for (RbfFamily fam : kFamilies) {
        for (int i = 0; i < 200; ++i) {
            const double eps = fam == RbfFamily::Gaussian ? 0.5 + 4.5 * u(rng) : 0.1 + 0.9 * u(rng);
            const double rx = 2 * u(rng) - 1;
            const double ry = 2 * u(rng) - 1;
            const double th = 2 * pi * u(rng);
            const double c = std::cos(th);
            const double s = std::sin(th);
            const RbfKind k(fam, eps);
            const double fd = (kernel_value(fam, eps, rx + h * c, ry + h * s) - 2 * kernel_value(fam, eps, rx, ry) +
                               kernel_value(fam, eps, rx - h * c, ry - h * s)) /
                              (h * h);
            const double exact = k.dir2(rx, ry, c, s);
            const double rel = std::abs(fd - exact) / std::max(std::abs(exact), 1e-3 * k.curvature_scale());
            worst = std::max(worst, rel);
            v.require(rel <= 1e-5, std::string(short_name(fam)) + " " + fmt(rel));
            ++n;
        }
    }
    v.detail << n << " cases, worst " << fmt(worst);
}

void criterion9(Verdict& v) {
    {
        const BenchmarkCase c = cases::square_two_term();
        std::vector<double> einf;
        for (const auto& spec : c.node_specs) {
            const NodeSet nodes = grid_2d(c.problem.domain, std::stoi(spec.substr(5)));
            const int M = static_cast<int>(nodes.size()) - 1;
            const auto r = run_pde_case(c, RbfKind(RbfFamily::Multiquadric, shape_param(0.98, M)), nodes, c.steps_for_m(M));
            einf.push_back(r.norms.einf);
        }
        for (std::size_t i = 1; i < einf.size(); ++i) v.require(einf[i] < einf[i - 1], "ex53i not decreasing");
        v.require(einf.back() <= 1e-3, "ex53i finest einf " + fmt(einf.back()));
        v.detail << "ex53i einf " << fmt(einf.front()) << " -> " << fmt(einf.back());
    }
    {
        const BenchmarkCase c = cases::disk(1.9);
        const NodeSet nodes = scattered_2d(c.problem.domain, 402, 1);
        const int M = static_cast<int>(nodes.size()) - 1;
        const auto r = run_pde_case(c, RbfKind(RbfFamily::InverseMultiquadric, shape_param(0.85, M)), nodes, 200);
        v.require(r.norms.e2 <= 2e-3, "ex55 e2 " + fmt(r.norms.e2));
        v.detail << "; ex55 M=" << M << " e2 " << fmt(r.norms.e2);
    }
    {
        std::vector<double> e2;
        for (double a : {1.2, 1.5, 1.8}) {
            const BenchmarkCase c = cases::l_shape(a);
            const NodeSet nodes = scattered_2d(c.problem.domain, 593, 1);
            const auto r = run_pde_case(c, RbfKind(RbfFamily::Multiquadric, 0.2128), nodes, c.steps_for_m(592));
            e2.push_back(r.norms.e2);
        }
        for (std::size_t i = 1; i < e2.size(); ++i) v.require(e2[i] < e2[i - 1], "ex56 e2 not decreasing in alpha");
        v.detail << "; ex56 e2 " << fmt(e2[0]) << ", " << fmt(e2[1]) << ", " << fmt(e2[2]);
    }
}

void criterion10(Verdict& v) {
    for (const BenchmarkCase& base : {cases::square_two_term(), cases::l_shape(), cases::trapezoid_two_sided()}) {
        BenchmarkCase c = base;
        c.problem.source = [](double, double, double) { return 0.0; };
        c.problem.initial = [](double, double) { return 0.0; };
        c.problem.boundary = [](double, double, double) { return 0.0; };
        c.exact = c.problem.boundary;
        const NodeSet nodes = scattered_2d(c.problem.domain, 150, 1);
        const auto r = run_pde_case(c, RbfKind(RbfFamily::Multiquadric, 0.3), nodes, 50);
        v.require(r.solve.final_solution.cwiseAbs().maxCoeff() == 0.0, c.name + " zero data not preserved");
    }
    double worst = 0.0;
    for (const auto& [domain, nodes] :
         {std::pair{Domain::interval(0, 1), chebyshev_1d(0, 1, 20)},
          std::pair{Domain::unit_square(), scattered_2d(Domain::unit_square(), 144, 1)},
          std::pair{Domain::l_shape(), scattered_2d(Domain::l_shape(), 200, 1)}}) {
        for (double alpha : {1.2, 1.6, 2.0}) {
            const WeightResult w = weights_mq(nodes, Direction(domain.is_1d() ? 0.0 : 0.7), alpha, 0.3, domain,
                                              *cached_gauss_jacobi(alpha, 50));
            const Eigen::VectorXd c = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(nodes.size()), 5.0);
            const double out = apply(w.weights, c).cwiseAbs().maxCoeff() / (5.0 * w.weights.entries.cwiseAbs().maxCoeff());
            worst = std::max(worst, out);
        }
    }
    v.require(worst <= 1e-8, "constant not annihilated " + fmt(worst));
    for (RbfFamily fam : kFamilies) {
        for (double alpha : {1.1, 1.5, 1.99}) {
            const double val =
                frac_dir_deriv(RbfKind(fam, 0.8), {0.3, 0.4}, {0.0, 0.5}, Direction(0.0), alpha, 0.0, *cached_gauss_jacobi(alpha, 50));
            v.require(val == 0.0, "z = 0 derivative " + fmt(val));
        }
    }
    v.detail << "constant residual " << fmt(worst);
}

// Lattice nodes coincide with the published grids, so the published errors are reproduced.
void lattice_check(Verdict& v) {
    const BenchmarkCase c = cases::square_two_term();
    const double want[] = {1.2391e-3, 5.3030e-4, 3.3018e-4, 1.9823e-4};
    for (std::size_t i = 0; i < c.node_specs.size(); ++i) {
        const NodeSet nodes = grid_2d(c.problem.domain, std::stoi(c.node_specs[i].substr(5)));
        const int M = static_cast<int>(nodes.size()) - 1;
        const auto r = run_pde_case(c, RbfKind(RbfFamily::Multiquadric, shape_param(0.98, M)), nodes, c.steps_for_m(M));
        v.require(within(r.norms.einf, want[i], 0.05), "M=" + std::to_string(M) + " einf " + fmt(r.norms.einf));
        v.detail << (i ? ", " : "einf ") << fmt(r.norms.einf);
    }
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    report("criterion 1 (derivative table)", criterion1);
    report("criterion 2 (1D diffusion table)", criterion2);
    report("criterion 3 (rate arithmetic)", criterion3);
    report("criterion 4 (MQ row sums)", criterion4);
    report("criterion 5 (weight reconstruction)", criterion5);
    report("criterion 6 (Gauss-Jacobi)", criterion6);
    report("criterion 7 (fractional derivative oracle)", criterion7);
    report("criterion 8 (dir2 finite differences)", criterion8);
    report("criterion 9 (2D bands)", criterion9);
    report("criterion 10 (fixed points)", criterion10);
    report("extra (square lattice errors)", lattice_check);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d failure(s), %.1f s total\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
