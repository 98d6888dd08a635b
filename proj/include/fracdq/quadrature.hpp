#pragma once

#include "fracdq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

namespace fracdq {

/// Gauss-Jacobi rule on [-1, 1] for the weight (1 + s)^(1 - alpha).
struct JacobiRule {
    double alpha = 2.0;
    std::vector<double> points;   // strictly increasing
    std::vector<double> weights;  // positive

    std::size_t size() const noexcept { return points.size(); }
};

/// Exponent b of the weight (1 + s)^b used for a fractional order. The
/// order alpha = 2 has no integrable singular weight; it maps to the
/// Legendre weight, which the derivative evaluation never needs since it
/// bypasses quadrature at alpha = 2.
inline double jacobi_exponent(double alpha) { return alpha == 2.0 ? 0.0 : 1.0 - alpha; }

/// Integral of (1 + s)^b over [-1, 1].
inline double jacobi_zeroth_moment(double alpha) {
    const double b = jacobi_exponent(alpha);
    return std::pow(2.0, b + 1.0) / (b + 1.0);
}

namespace detail {

// Implicit-shift QL on a symmetric tridiagonal matrix. On return `diag`
// holds the eigenvalues and `first` the first component of each normalised
// eigenvector (it must start as e_0). `off[i]` couples rows i and i+1.
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off,
                           std::vector<double>& first) {
    const int n = static_cast<int>(diag.size());
    off.resize(n, 0.0);
    off[n - 1] = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > 100) {
                throw Error("tridiagonal eigensolver did not converge");
            }
            double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = m - 1;
            bool deflated = false;
            for (; i >= l; --i) {
                double f = s * off[i];
                const double b = c * off[i];
                r = std::hypot(f, g);
                off[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = first[i + 1];
                first[i + 1] = s * first[i] + c * f;
                first[i] = c * first[i] - s * f;
            }
            if (deflated) continue;
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        } while (m != l);
    }
}

}  // namespace detail

/// q-point Gauss-Jacobi rule for the weight (1 - s)^0 (1 + s)^(1 - alpha),
/// computed with the Golub-Welsch algorithm from the monic Jacobi recurrence.
inline JacobiRule gauss_jacobi(double alpha, int q) {
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw InvalidInput("gauss_jacobi: alpha must lie in (1, 2]");
    }
    if (q < 1) {
        throw InvalidInput("gauss_jacobi: need at least one point");
    }
    const double a = 0.0;
    const double b = jacobi_exponent(alpha);
    const double ab = a + b;

    std::vector<double> diag(q);
    std::vector<double> off(q, 0.0);
    diag[0] = (b - a) / (ab + 2.0);
    for (int n = 1; n < q; ++n) {
        const double s = 2.0 * n + ab;
        diag[n] = (b * b - a * a) / (s * (s + 2.0));
        const double beta = 4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0));
        off[n - 1] = std::sqrt(beta);
    }
    std::vector<double> first(q, 0.0);
    first[0] = 1.0;
    detail::tridiagonal_ql(diag, off, first);

    const double mu0 = jacobi_zeroth_moment(alpha);
    std::vector<std::size_t> order(q);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return diag[i] < diag[j]; });

    JacobiRule rule;
    rule.alpha = alpha;
    rule.points.reserve(q);
    rule.weights.reserve(q);
    for (auto k : order) {
        rule.points.push_back(diag[k]);
        rule.weights.push_back(mu0 * first[k] * first[k]);
    }
    return rule;
}

/// Shared immutable rule per (alpha, q).
inline std::shared_ptr<const JacobiRule> cached_gauss_jacobi(double alpha, int q) {
    static std::mutex mutex;
    static std::map<std::pair<double, int>, std::shared_ptr<const JacobiRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{alpha, q}];
    if (!slot) {
        slot = std::make_shared<const JacobiRule>(gauss_jacobi(alpha, q));
    }
    return slot;
}

}  // namespace fracdq
