#pragma once

// Command-line front end. Needs CLI11.hpp and json.hpp on the include path.

#include "fracdq/bench.hpp"
#include "fracdq/dqweights.hpp"
#include "fracdq/error.hpp"
#include "fracdq/expr.hpp"
#include "fracdq/nodes.hpp"
#include "fracdq/problem_config.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace fracdq {

/// Node generator grammar: "cheb:M", "grid:COUNT", "scatter:COUNT[:seed=S]",
/// anything else is a node file path.
inline NodeSet make_nodes(const std::string& spec, const Domain& domain) {
    auto count_after = [&](std::size_t prefix, std::size_t end) {
        const std::string digits = spec.substr(prefix, end - prefix);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(digits, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (digits.empty() || used != digits.size()) {
            throw InvalidInput("bad count in node spec '" + spec + "'");
        }
        return v;
    };
    if (spec.rfind("cheb:", 0) == 0) {
        const auto* iv = std::get_if<Interval>(&domain.shape());
        if (!iv) throw InvalidInput("cheb nodes need an interval domain");
        return chebyshev_1d(iv->a, iv->b, count_after(5, spec.size()));
    }
    if (spec.rfind("grid:", 0) == 0) {
        return grid_2d(domain, count_after(5, spec.size()));
    }
    if (spec.rfind("scatter:", 0) == 0) {
        const std::size_t colon = spec.find(':', 8);
        const int count = count_after(8, colon == std::string::npos ? spec.size() : colon);
        std::uint64_t seed = 1;
        if (colon != std::string::npos) {
            const std::string rest = spec.substr(colon + 1);
            if (rest.rfind("seed=", 0) != 0 || rest.size() == 5 ||
                rest.find_first_not_of("0123456789", 5) != std::string::npos) {
                throw InvalidInput("expected seed=S in node spec '" + spec + "'");
            }
            seed = std::stoull(rest.substr(5));
        }
        return scattered_2d(domain, count, seed);
    }
    return load_nodes(spec, domain);
}

/// epsilon, c* or the case default, in that order. At most one of the
/// explicit values may be set.
inline double resolve_epsilon(const std::map<RbfFamily, ShapeRule>& shapes, RbfFamily family, int M,
                              std::optional<double> eps, std::optional<double> c_star) {
    if (eps && c_star) throw InvalidInput("give either --eps or --cstar, not both");
    if (eps) {
        if (!(*eps > 0.0)) throw InvalidInput("--eps must be positive");
        return *eps;
    }
    if (c_star) return shape_param(*c_star, M);
    const auto it = shapes.find(family);
    if (it == shapes.end()) {
        throw InvalidInput("no default shape parameter for " + std::string(short_name(family)) +
                           " on this case; pass --eps or --cstar");
    }
    return it->second.epsilon_for(M);
}

struct CliOptions {
    std::string case_name;
    std::string problem_path;
    std::string rbf;
    std::optional<double> eps;
    std::optional<double> c_star;
    std::string nodes;
    std::vector<std::string> levels;
    std::vector<int> m_list;
    std::optional<int> steps;
    int q = 50;
    std::string out;
    std::string dump;
    int stride = 0;
    std::optional<double> alpha;
    std::string theta = "0";
    std::string domain;
    bool timing = false;
};

namespace detail {

// Either a time-dependent problem or the derivative benchmark.
using AnyCase = std::variant<BenchmarkCase, DerivativeCase>;

inline AnyCase load_case(const CliOptions& o) {
    if (!o.problem_path.empty()) return load_problem(o.problem_path);
    if (o.case_name.empty()) throw InvalidInput("give --case or --problem");
    if (o.case_name == "ex51") return cases::power_derivative(o.alpha.value_or(1.2));
    return catalog_case(o.case_name, o.alpha);
}

inline RbfFamily pick_family(const CliOptions& o, RbfFamily fallback) {
    return o.rbf.empty() ? fallback : parse_rbf_family(o.rbf);
}

struct Level {
    ResultRow row;
    NodeSet nodes;
    Eigen::VectorXd exact;
    Eigen::VectorXd numeric;
    std::vector<std::pair<double, Eigen::VectorXd>> snapshots;
    double horizon = 1.0;
    bool ill_conditioned = false;
};

inline Level run_level(const AnyCase& any, const CliOptions& o, const std::string& spec) {
    Level lv;
    lv.row.Q = o.q;
    if (o.q < 1) throw InvalidInput("--q must be at least 1");
    if (const auto* dc = std::get_if<DerivativeCase>(&any)) {
        if (spec.rfind("cheb:", 0) != 0) throw InvalidInput("ex51 runs on Chebyshev nodes (cheb:M)");
        const int M = std::stoi(spec.substr(5));
        const RbfFamily family = pick_family(o, RbfFamily::Multiquadric);
        const double eps = resolve_epsilon(dc->shapes, family, M, o.eps, o.c_star);
        const auto start = std::chrono::steady_clock::now();
        DerivativeResult r = run_derivative_case(*dc, RbfKind(family, eps), M, o.q);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        lv.row = {dc->name, std::string(short_name(family)), M, 0, o.q, eps, r.norms.e2, r.norms.einf, {},
                  o.timing ? wall * 1e3 : 0.0, r.report.condition_estimate};
        lv.nodes = std::move(r.nodes);
        lv.exact = std::move(r.exact);
        lv.numeric = std::move(r.numeric);
        lv.ill_conditioned = r.report.ill_conditioned();
        return lv;
    }
    const auto& bc = std::get<BenchmarkCase>(any);
    NodeSet nodes = make_nodes(spec, bc.problem.domain);
    const int M = static_cast<int>(nodes.size()) - 1;
    const RbfFamily family = pick_family(o, bc.default_rbf);
    const double eps = resolve_epsilon(bc.shapes, family, M, o.eps, o.c_star);
    const int N = o.steps ? *o.steps : bc.steps_for_m(M);
    if (N < 1) throw InvalidInput("--steps must be at least 1");
    PdeResult r = run_pde_case(bc, RbfKind(family, eps), nodes, N, o.q, SnapshotPolicy{o.stride});
    lv.row = {bc.name, std::string(short_name(family)), M, N, o.q, eps, r.norms.e2, r.norms.einf, {},
              o.timing ? r.solve.wall_time * 1e3 : 0.0, r.worst_condition()};
    for (const auto& c : r.collocation) lv.ill_conditioned = lv.ill_conditioned || c.ill_conditioned();
    lv.nodes = std::move(nodes);
    lv.exact = std::move(r.exact);
    lv.numeric = std::move(r.solve.final_solution);
    lv.snapshots = std::move(r.solve.snapshots);
    lv.horizon = bc.problem.horizon;
    return lv;
}

inline void write_results(const CliOptions& o, const std::vector<ResultRow>& rows, std::ostream& out) {
    auto emit = [&](std::ostream& os) {
        os << kResultsHeader << '\n';
        for (const auto& r : rows) write_result_row(os, r);
    };
    if (o.out.empty()) {
        emit(out);
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw InvalidInput("cannot open '" + o.out + "' for writing");
    emit(f);
}

inline void write_dump(const std::string& path, const NodeSet& nodes, const Eigen::VectorXd& exact,
                       const Eigen::VectorXd& numeric) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
    write_solution_csv(f, nodes, exact, numeric);
}

// "out.csv" with step 40 -> "out_40.csv".
inline std::string snapshot_path(const std::string& dump, long step) {
    const auto dot = dump.rfind('.');
    const auto slash = dump.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return dump + "_" + std::to_string(step);
    }
    return dump.substr(0, dot) + "_" + std::to_string(step) + dump.substr(dot);
}

inline void print_summary(std::ostream& out, std::ostream& err, const Level& lv) {
    out << std::setprecision(17) << lv.row.case_name << ' ' << lv.row.rbf << " M=" << lv.row.M << " N=" << lv.row.N
        << " eps=" << lv.row.epsilon << " e2=" << lv.row.e2 << " einf=" << lv.row.einf << " cond=" << lv.row.cond
        << '\n';
    if (lv.ill_conditioned) {
        err << "warning: collocation condition estimate exceeds " << kConditionWarning
            << "; results may be unreliable\n";
    }
}

inline int cmd_run(const CliOptions& o, std::ostream& out, std::ostream& err) {
    const AnyCase any = load_case(o);
    std::string spec = o.nodes;
    if (spec.empty()) {
        if (const auto* dc = std::get_if<DerivativeCase>(&any)) {
            spec = "cheb:" + std::to_string(dc->m_list.front());
        } else {
            spec = std::get<BenchmarkCase>(any).node_specs.front();
        }
    }
    Level lv = run_level(any, o, spec);
    print_summary(out, err, lv);
    if (!o.dump.empty()) {
        write_dump(o.dump, lv.nodes, lv.exact, lv.numeric);
        if (const auto* bc = std::get_if<BenchmarkCase>(&any); bc && o.stride > 0) {
            const double tau = bc->problem.horizon / lv.row.N;
            for (const auto& [t, u] : lv.snapshots) {
                Eigen::VectorXd ex(u.size());
                for (std::size_t j = 0; j < lv.nodes.size(); ++j) {
                    ex(static_cast<Eigen::Index>(j)) = bc->exact(lv.nodes.points[j].x, lv.nodes.points[j].y, t);
                }
                write_dump(snapshot_path(o.dump, std::lround(t / tau)), lv.nodes, ex, u);
            }
        }
    }
    write_results(o, {lv.row}, out);
    return 0;
}

inline std::vector<std::string> convergence_levels(const AnyCase& any, const CliOptions& o) {
    if (!o.levels.empty() && !o.m_list.empty()) throw InvalidInput("give either --levels or --m, not both");
    if (!o.levels.empty()) return o.levels;
    std::vector<std::string> out;
    if (const auto* dc = std::get_if<DerivativeCase>(&any)) {
        for (int M : o.m_list.empty() ? dc->m_list : o.m_list) out.push_back("cheb:" + std::to_string(M));
        return out;
    }
    const auto& bc = std::get<BenchmarkCase>(any);
    if (o.m_list.empty()) return bc.node_specs;
    const std::string& first = bc.node_specs.front();
    for (int M : o.m_list) {
        if (first.rfind("cheb:", 0) == 0) {
            out.push_back("cheb:" + std::to_string(M));
        } else if (first.rfind("grid:", 0) == 0) {
            out.push_back("grid:" + std::to_string(M + 1));
        } else {
            out.push_back("scatter:" + std::to_string(M + 1) + ":seed=1");
        }
    }
    return out;
}

inline int cmd_convergence(const CliOptions& o, std::ostream& out, std::ostream& err) {
    const AnyCase any = load_case(o);
    const std::vector<std::string> levels = convergence_levels(any, o);
    if (levels.size() < 2) throw InvalidInput("a convergence study needs at least two levels");
    const bool one_d = std::holds_alternative<DerivativeCase>(any) ||
                       std::get<BenchmarkCase>(any).problem.domain.is_1d();
    std::vector<ResultRow> rows;
    out << std::setw(6) << "M" << std::setw(7) << "N" << std::setw(12) << "epsilon" << std::setw(14) << "e2"
        << std::setw(14) << "einf" << std::setw(9) << "rate" << '\n';
    for (const auto& spec : levels) {
        Level lv = run_level(any, o, spec);
        if (!rows.empty()) {
            const auto& prev = rows.back();
            const double m1 = one_d ? prev.M : prev.M + 1.0;
            const double m2 = one_d ? lv.row.M : lv.row.M + 1.0;
            if (m1 != m2 && prev.einf > 0.0 && lv.row.einf > 0.0) {
                lv.row.rate = conv_rate(prev.einf, lv.row.einf, m1, m2, one_d ? 1 : 2);
            }
        }
        std::ostringstream rate;
        if (lv.row.rate) rate << std::fixed << std::setprecision(4) << *lv.row.rate;
        out << std::setw(6) << lv.row.M << std::setw(7) << lv.row.N << std::setw(12) << std::setprecision(4)
            << lv.row.epsilon << std::scientific << std::setw(14) << lv.row.e2 << std::setw(14) << lv.row.einf
            << std::defaultfloat << std::setw(9) << rate.str() << '\n';
        if (lv.ill_conditioned) {
            err << "warning: M=" << lv.row.M << " collocation condition estimate exceeds " << kConditionWarning
                << '\n';
        }
        rows.push_back(lv.row);
    }
    write_results(o, rows, out);
    return 0;
}

inline int cmd_weights(const CliOptions& o, std::ostream& out, std::ostream& err) {
    if (o.rbf.empty()) throw InvalidInput("weights needs --rbf");
    if (o.nodes.empty()) throw InvalidInput("weights needs --nodes");
    if (!o.alpha) throw InvalidInput("weights needs --alpha");
    const std::string dom = o.domain.empty() ? (o.nodes.rfind("cheb:", 0) == 0 ? "interval" : "square") : o.domain;
    const Domain domain = named_domain(dom);
    const NodeSet nodes = make_nodes(o.nodes, domain);
    const int M = static_cast<int>(nodes.size()) - 1;
    if (!o.eps && !o.c_star) throw InvalidInput("weights needs --eps or --cstar");
    const double eps = resolve_epsilon({}, parse_rbf_family(o.rbf), M, o.eps, o.c_star);
    const RbfKind kind(parse_rbf_family(o.rbf), eps);
    check_fractional_order(*o.alpha);
    if (o.q < 1) throw InvalidInput("--q must be at least 1");
    const auto rule = cached_gauss_jacobi(*o.alpha, o.q);
    const WeightResult w = compute_weights(kind, nodes, Direction(eval_constant(o.theta)), *o.alpha, domain, *rule);
    out << std::setprecision(17) << "condition estimate " << w.report.condition_estimate << '\n'
        << "max reconstruction residual " << w.report.max_residual << '\n';
    if (w.report.ill_conditioned()) {
        err << "warning: condition estimate " << w.report.condition_estimate << " exceeds " << kConditionWarning
            << "; weights may be inaccurate\n";
    }
    if (o.out.empty()) {
        write_weights_csv(out, w.weights);
    } else {
        std::ofstream f(o.out);
        if (!f) throw InvalidInput("cannot open '" + o.out + "' for writing");
        write_weights_csv(f, w.weights);
    }
    return 0;
}

inline int cmd_nodes(const CliOptions& o, std::ostream& out) {
    if (o.nodes.empty()) throw InvalidInput("nodes needs --nodes");
    const std::string dom = o.domain.empty() ? (o.nodes.rfind("cheb:", 0) == 0 ? "interval" : "square") : o.domain;
    const NodeSet nodes = make_nodes(o.nodes, named_domain(dom));
    if (o.out.empty()) {
        save_nodes(out, nodes);
    } else {
        save_nodes(o.out, nodes);
        out << "wrote " << nodes.size() << " nodes (" << nodes.boundary_idx.size() << " on the boundary) to "
            << o.out << '\n';
    }
    return 0;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. Returns 0 on success,
/// 1 on a configuration error and 2 on a numerical failure.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliOptions o;
    CLI::App app{"Meshless RBF differential quadrature for space-fractional diffusion"};
    app.require_subcommand(1);

    auto shared = [&](CLI::App* sub) {
        auto* eps = sub->add_option("--eps", o.eps, "shape parameter");
        auto* cst = sub->add_option("--cstar", o.c_star, "shape constant, epsilon = c*/(M+1)^0.25");
        eps->excludes(cst);
        sub->add_option("--rbf", o.rbf, "kernel: mq, imq or ga");
        sub->add_option("--q", o.q, "Gauss-Jacobi points")->capture_default_str();
        sub->add_option("--out", o.out, "output file (default: standard output)");
        sub->add_option("--alpha", o.alpha, "fractional order");
    };
    auto problem = [&](CLI::App* sub) {
        auto* c = sub->add_option("--case", o.case_name, "catalog case: ex51 ex52 ex53i ex53ii ex54 ex55 ex56");
        auto* p = sub->add_option("--problem", o.problem_path, "JSON problem file");
        c->excludes(p);
        sub->add_option("--steps", o.steps, "time steps N");
        sub->add_flag("--timing", o.timing, "record wall time in the results (breaks byte-identical output)");
    };

    auto* run = app.add_subcommand("run", "run one case and write a results row");
    shared(run);
    problem(run);
    run->add_option("--nodes", o.nodes, "cheb:M, grid:COUNT, scatter:COUNT:seed=S or a node file");
    run->add_option("--dump", o.dump, "per-node solution CSV");
    run->add_option("--stride", o.stride, "with --dump, also dump every stride-th step");

    auto* conv = app.add_subcommand("convergence", "run a case over several node sets");
    shared(conv);
    problem(conv);
    auto* lv = conv->add_option("--levels", o.levels, "node specs, comma separated")->delimiter(',');
    auto* ml = conv->add_option("--m", o.m_list, "values of M, comma separated")->delimiter(',');
    lv->excludes(ml);

    auto* wts = app.add_subcommand("weights", "dump the DQ weight matrix of one term");
    shared(wts);
    wts->add_option("--nodes", o.nodes, "node spec or file")->required();
    wts->add_option("--theta", o.theta, "direction angle (constant expression)");
    wts->add_option("--domain", o.domain, "square, lshape, trapezoid, disk or interval");

    auto* nds = app.add_subcommand("nodes", "generate a node file");
    nds->add_option("--nodes", o.nodes, "node spec")->required();
    nds->add_option("--domain", o.domain, "square, lshape, trapezoid, disk or interval");
    nds->add_option("--out", o.out, "output file (default: standard output)");

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return detail::cmd_run(o, out, err);
        if (*conv) return detail::cmd_convergence(o, out, err);
        if (*wts) return detail::cmd_weights(o, out, err);
        return detail::cmd_nodes(o, out);
    } catch (const SingularMatrixError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace fracdq
