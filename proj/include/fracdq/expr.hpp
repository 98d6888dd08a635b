#pragma once

#include "fracdq/error.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fracdq {

/// Small arithmetic language over x, y, t used by problem files.
///
///   expr    := compare
///   compare := sum [("<" | "<=" | ">" | ">=" | "==" | "!=") sum]
///   sum     := product (("+" | "-") product)*
///   product := unary (("*" | "/") unary)*
///   unary   := ("-" | "+") unary | power
///   power   := atom ["^" unary]              right associative
///   atom    := number | name | name "(" args ")" | "(" expr ")"
///
/// Names: x, y, t, pi, e. Functions: gamma, exp, log, sqrt, pow, sin, cos,
/// tan, abs, min, max, and piecewise(c1, v1, ..., cn, vn, default) which
/// returns the first v whose c is nonzero. Comparisons yield 1 or 0.
class Expression {
public:
    Expression() : Expression("0") {}

    explicit Expression(std::string text) : text_(std::move(text)) {
        Parser p{text_, 0};
        root_ = p.parse_expr();
        p.skip_space();
        if (p.pos != text_.size()) p.fail("unexpected '" + std::string(1, text_[p.pos]) + "'");
    }

    double operator()(double x, double y = 0.0, double t = 0.0) const { return root_({x, y, t}); }

    const std::string& text() const noexcept { return text_; }

    /// True when the value does not depend on x, y or t.
    bool is_constant() const { return text_uses_ == 0; }

private:
    struct Vars {
        double x, y, t;
    };
    using Node = std::function<double(const Vars&)>;

    struct Parser {
        const std::string& s;
        std::size_t pos;

        [[noreturn]] void fail(const std::string& msg) const {
            throw ParseError("expression '" + s + "' at column " + std::to_string(pos + 1) + ": " + msg, 0);
        }

        void skip_space() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }

        bool eat(std::string_view tok) {
            skip_space();
            if (s.compare(pos, tok.size(), tok) == 0) {
                pos += tok.size();
                return true;
            }
            return false;
        }

        Node parse_expr() {
            Node lhs = parse_sum();
            static const std::pair<std::string_view, int> ops[] = {{"<=", 0}, {">=", 1}, {"==", 2},
                                                                   {"!=", 3}, {"<", 4},  {">", 5}};
            for (const auto& [tok, code] : ops) {
                if (eat(tok)) {
                    Node rhs = parse_sum();
                    return [lhs, rhs, code](const Vars& v) {
                        const double a = lhs(v);
                        const double b = rhs(v);
                        switch (code) {
                            case 0: return a <= b ? 1.0 : 0.0;
                            case 1: return a >= b ? 1.0 : 0.0;
                            case 2: return a == b ? 1.0 : 0.0;
                            case 3: return a != b ? 1.0 : 0.0;
                            case 4: return a < b ? 1.0 : 0.0;
                            default: return a > b ? 1.0 : 0.0;
                        }
                    };
                }
            }
            return lhs;
        }

        Node parse_sum() {
            Node acc = parse_product();
            for (;;) {
                if (eat("+")) {
                    Node r = parse_product();
                    acc = [acc, r](const Vars& v) { return acc(v) + r(v); };
                } else if (eat("-")) {
                    Node r = parse_product();
                    acc = [acc, r](const Vars& v) { return acc(v) - r(v); };
                } else {
                    return acc;
                }
            }
        }

        Node parse_product() {
            Node acc = parse_unary();
            for (;;) {
                if (eat("*")) {
                    Node r = parse_unary();
                    acc = [acc, r](const Vars& v) { return acc(v) * r(v); };
                } else if (eat("/")) {
                    Node r = parse_unary();
                    acc = [acc, r](const Vars& v) { return acc(v) / r(v); };
                } else {
                    return acc;
                }
            }
        }

        Node parse_unary() {
            if (eat("-")) {
                Node r = parse_unary();
                return [r](const Vars& v) { return -r(v); };
            }
            if (eat("+")) return parse_unary();
            return parse_power();
        }

        Node parse_power() {
            Node base = parse_atom();
            if (eat("^")) {
                Node ex = parse_unary();
                return [base, ex](const Vars& v) { return std::pow(base(v), ex(v)); };
            }
            return base;
        }

        Node parse_atom() {
            skip_space();
            if (pos >= s.size()) fail("unexpected end of input");
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
            if (eat("(")) {
                Node inner = parse_expr();
                if (!eat(")")) fail("expected ')'");
                return inner;
            }
            fail("unexpected '" + std::string(1, c) + "'");
        }

        Node parse_number() {
            const char* begin = s.c_str() + pos;
            char* end = nullptr;
            const double value = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos += static_cast<std::size_t>(end - begin);
            return [value](const Vars&) { return value; };
        }

        Node parse_name() {
            const std::size_t start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
            const std::string name = s.substr(start, pos - start);
            skip_space();
            if (pos < s.size() && s[pos] == '(') {
                ++pos;
                std::vector<Node> args;
                if (!eat(")")) {
                    do {
                        args.push_back(parse_expr());
                    } while (eat(","));
                    if (!eat(")")) fail("expected ')' after arguments of " + name);
                }
                return make_call(name, std::move(args));
            }
            if (name == "x") return [](const Vars& v) { return v.x; };
            if (name == "y") return [](const Vars& v) { return v.y; };
            if (name == "t") return [](const Vars& v) { return v.t; };
            if (name == "pi") return [](const Vars&) { return std::numbers::pi; };
            if (name == "e") return [](const Vars&) { return std::numbers::e; };
            pos = start;
            fail("unknown name '" + name + "'");
        }

        Node make_call(const std::string& name, std::vector<Node> args) {
            auto need = [&](std::size_t n) {
                if (args.size() != n) {
                    fail(name + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                         std::to_string(args.size()));
                }
            };
            using Fn1 = double (*)(double);
            static const std::pair<const char*, Fn1> unary[] = {
                {"gamma", [](double a) { return std::tgamma(a); }}, {"exp", [](double a) { return std::exp(a); }},
                {"log", [](double a) { return std::log(a); }},      {"sqrt", [](double a) { return std::sqrt(a); }},
                {"sin", [](double a) { return std::sin(a); }},      {"cos", [](double a) { return std::cos(a); }},
                {"tan", [](double a) { return std::tan(a); }},      {"abs", [](double a) { return std::abs(a); }},
            };
            for (const auto& [fname, fn] : unary) {
                if (name == fname) {
                    need(1);
                    Node a = args[0];
                    return [a, fn](const Vars& v) { return fn(a(v)); };
                }
            }
            if (name == "pow" || name == "min" || name == "max") {
                need(2);
                Node a = args[0];
                Node b = args[1];
                if (name == "pow") return [a, b](const Vars& v) { return std::pow(a(v), b(v)); };
                if (name == "min") return [a, b](const Vars& v) { return std::min(a(v), b(v)); };
                return [a, b](const Vars& v) { return std::max(a(v), b(v)); };
            }
            if (name == "piecewise") {
                if (args.size() < 3 || args.size() % 2 == 0) {
                    fail("piecewise takes condition/value pairs followed by a default");
                }
                return [args = std::move(args)](const Vars& v) {
                    for (std::size_t i = 0; i + 1 < args.size(); i += 2) {
                        if (args[i](v) != 0.0) return args[i + 1](v);
                    }
                    return args.back()(v);
                };
            }
            fail("unknown function '" + name + "'");
        }
    };

    static int count_uses(const std::string& text) {
        int n = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            const char c = text[i];
            if (c != 'x' && c != 'y' && c != 't') continue;
            const bool left_ok = i == 0 || !(std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_');
            const bool right_ok = i + 1 == text.size() ||
                                  !(std::isalnum(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '_');
            if (left_ok && right_ok) ++n;
        }
        return n;
    }

    std::string text_;
    Node root_;
    int text_uses_ = count_uses(text_);
};

/// Evaluates a constant expression such as "pi/4".
inline double eval_constant(const std::string& text) {
    const Expression e(text);
    if (!e.is_constant()) throw ParseError("expression '" + text + "' must not depend on x, y or t", 0);
    return e(0.0, 0.0, 0.0);
}

}  // namespace fracdq
