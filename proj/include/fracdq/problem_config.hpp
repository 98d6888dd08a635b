#pragma once

// Needs the single-header nlohmann json (vendor/json.hpp) on the include path.

#include "fracdq/bench.hpp"
#include "fracdq/error.hpp"
#include "fracdq/expr.hpp"
#include "fracdq/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace fracdq {

/// Custom problem file. Keys:
///
///   name      optional label for the results table
///   domain    "square" | "lshape" | "trapezoid" | "disk" | "interval"
///             or {"interval": [a, b]} | {"polygon": [[x, y], ...]}
///             or {"circle": {"center": [x, y], "radius": r}}
///   terms     [{"alpha": a, "theta": "pi/4", "kappa": "x^1.8"}, ...]
///   source    f(x, y, t)
///   exact     u(x, y, t), optional; initial and boundary default to it
///   initial   u0(x, y)
///   boundary  g(x, y, t)
///   horizon   T (default 1)
///
/// Angles and orders may be numbers or constant expressions.
namespace detail {

inline double json_number(const nlohmann::json& j, const std::string& key) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return eval_constant(j.get<std::string>());
    throw ParseError("'" + key + "' must be a number or a constant expression", 0);
}

inline Expression json_expression(const nlohmann::json& j, const std::string& key) {
    if (j.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << j.get<double>();
        return Expression(os.str());
    }
    if (!j.is_string()) throw ParseError("'" + key + "' must be an expression string", 0);
    return Expression(j.get<std::string>());
}

inline Point2 json_point(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("points are written as [x, y]", 0);
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline Domain named_domain(const std::string& name) {
    if (name == "square") return Domain::unit_square();
    if (name == "lshape") return Domain::l_shape();
    if (name == "trapezoid") return Domain::trapezoid();
    if (name == "disk") return Domain::unit_disk();
    if (name == "interval") return Domain::interval(0.0, 1.0);
    throw InvalidInput("unknown domain '" + name + "' (expected square, lshape, trapezoid, disk or interval)");
}

inline Domain parse_domain(const nlohmann::json& j) {
    if (j.is_string()) return named_domain(j.get<std::string>());
    if (!j.is_object() || j.size() != 1) throw ParseError("domain must be a name or a single-key object", 0);
    if (j.contains("interval")) {
        const auto& v = j["interval"];
        if (!v.is_array() || v.size() != 2) throw ParseError("interval is written as [a, b]", 0);
        return Domain::interval(v[0].get<double>(), v[1].get<double>());
    }
    if (j.contains("polygon")) {
        std::vector<Point2> pts;
        for (const auto& p : j["polygon"]) pts.push_back(detail::json_point(p));
        return Domain::polygon(std::move(pts));
    }
    if (j.contains("circle")) {
        const auto& c = j["circle"];
        return Domain::circle(detail::json_point(c.at("center")), c.at("radius").get<double>());
    }
    throw ParseError("unknown domain kind '" + j.begin().key() + "'", 0);
}

/// Builds a benchmark case from a problem file. Without an "exact" entry the
/// case's exact solution is NaN everywhere and errors are not meaningful.
inline BenchmarkCase parse_problem(std::istream& is) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("problem file is not valid JSON: ") + e.what(), 0);
    }
    if (!j.is_object()) throw ParseError("problem file must hold a JSON object", 0);
    static const std::vector<std::string> known = {"name",  "domain",  "terms",    "source",
                                                   "exact", "initial", "boundary", "horizon"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ParseError("unknown key '" + it.key() + "' in problem file", 0);
        }
    }
    for (const char* key : {"domain", "terms", "source"}) {
        if (!j.contains(key)) throw ParseError(std::string("problem file needs '") + key + "'", 0);
    }
    try {
        BenchmarkCase c;
        c.name = j.value("name", std::string("custom"));
        c.description = "problem file";
        c.problem.domain = parse_domain(j["domain"]);
        if (!j["terms"].is_array() || j["terms"].empty()) throw ParseError("'terms' must be a non-empty array", 0);
        for (const auto& t : j["terms"]) {
            const double alpha = detail::json_number(t.at("alpha"), "alpha");
            const double theta = t.contains("theta") ? detail::json_number(t["theta"], "theta") : 0.0;
            const Expression kappa = detail::json_expression(t.at("kappa"), "kappa");
            c.problem.terms.push_back({alpha, Direction(theta), [kappa](double x, double y) { return kappa(x, y); }});
        }
        const Expression source = detail::json_expression(j["source"], "source");
        c.problem.source = [source](double x, double y, double t) { return source(x, y, t); };
        if (j.contains("exact")) {
            const Expression exact = detail::json_expression(j["exact"], "exact");
            c.exact = [exact](double x, double y, double t) { return exact(x, y, t); };
        } else {
            c.exact = [](double, double, double) { return std::nan(""); };
            for (const char* key : {"initial", "boundary"}) {
                if (!j.contains(key)) throw ParseError(std::string("without 'exact' the file needs '") + key + "'", 0);
            }
        }
        if (j.contains("initial")) {
            const Expression init = detail::json_expression(j["initial"], "initial");
            c.problem.initial = [init](double x, double y) { return init(x, y, 0.0); };
        } else {
            const auto exact = c.exact;
            c.problem.initial = [exact](double x, double y) { return exact(x, y, 0.0); };
        }
        if (j.contains("boundary")) {
            const Expression g = detail::json_expression(j["boundary"], "boundary");
            c.problem.boundary = [g](double x, double y, double t) { return g(x, y, t); };
        } else {
            c.problem.boundary = c.exact;
        }
        c.problem.horizon = j.contains("horizon") ? detail::json_number(j["horizon"], "horizon") : 1.0;
        if (!(c.problem.horizon > 0.0)) throw InvalidInput("horizon must be positive");
        c.default_rbf = RbfFamily::Multiquadric;
        c.node_specs = {c.problem.domain.is_1d() ? "cheb:20" : "grid:100"};
        c.steps_for_m = [](int M) { return std::max(1, M); };
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("problem file: ") + e.what(), 0);
    }
}

inline BenchmarkCase load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open problem file '" + path + "'");
    return parse_problem(in);
}

}  // namespace fracdq
