#pragma once

#include "fracdq/error.hpp"
#include "fracdq/geometry.hpp"

#include <cmath>
#include <string>
#include <string_view>

namespace fracdq {

enum class RbfFamily { Multiquadric, InverseMultiquadric, Gaussian };

inline std::string_view short_name(RbfFamily f) {
    switch (f) {
        case RbfFamily::Multiquadric: return "mq";
        case RbfFamily::InverseMultiquadric: return "imq";
        default: return "ga";
    }
}

inline RbfFamily parse_rbf_family(std::string_view s) {
    if (s == "mq" || s == "multiquadric") return RbfFamily::Multiquadric;
    if (s == "imq" || s == "inverse-multiquadric") return RbfFamily::InverseMultiquadric;
    if (s == "ga" || s == "gaussian") return RbfFamily::Gaussian;
    throw InvalidInput("unknown RBF kind '" + std::string(s) + "' (expected mq, imq or ga)");
}

/// Kernel family with its shape parameter.
class RbfKind {
public:
    RbfKind(RbfFamily family, double epsilon) : family_(family), epsilon_(epsilon) {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
            throw InvalidInput("RBF shape parameter must be positive and finite");
        }
    }

    RbfFamily family() const noexcept { return family_; }
    double epsilon() const noexcept { return epsilon_; }

    /// Kernel value at offset (rx, ry) from the center.
    double eval(double rx, double ry) const noexcept {
        const double r2 = rx * rx + ry * ry;
        const double e2 = epsilon_ * epsilon_;
        switch (family_) {
            case RbfFamily::Multiquadric: return std::sqrt(r2 + e2);
            case RbfFamily::InverseMultiquadric: return 1.0 / std::sqrt(r2 + e2);
            default: return std::exp(-e2 * r2);
        }
    }

    /// Second directional derivative (cos t d/dx + sin t d/dy)^2 at offset
    /// (rx, ry) from the center.
    double dir2(double rx, double ry, double c, double s) const noexcept {
        const double e2 = epsilon_ * epsilon_;
        const double r2 = rx * rx + ry * ry;
        switch (family_) {
            case RbfFamily::Multiquadric: {
                // Hessian of sqrt(r^2 + e^2): ((r^2 + e^2) I - r r^T) / (r^2 + e^2)^(3/2).
                const double q = r2 + e2;
                const double along = c * rx + s * ry;
                return (q - along * along) / (q * std::sqrt(q));
            }
            case RbfFamily::InverseMultiquadric: {
                const double q = r2 + e2;
                const double along = c * rx + s * ry;
                const double q32 = q * std::sqrt(q);
                return 3.0 * along * along / (q * q32) - 1.0 / q32;
            }
            default: {
                const double along = c * rx + s * ry;
                return 2.0 * e2 * std::exp(-e2 * r2) * (2.0 * e2 * along * along - 1.0);
            }
        }
    }

    double eval(Point2 center, Point2 p) const noexcept { return eval(p.x - center.x, p.y - center.y); }

    double dir2(Point2 center, Point2 p, const Direction& d) const noexcept {
        return dir2(p.x - center.x, p.y - center.y, d.cos(), d.sin());
    }

    /// Magnitude of the second derivative at the center; a natural scale for
    /// relative comparisons.
    double curvature_scale() const noexcept {
        switch (family_) {
            case RbfFamily::Multiquadric: return 1.0 / epsilon_;
            case RbfFamily::InverseMultiquadric: return 1.0 / (epsilon_ * epsilon_ * epsilon_);
            default: return 2.0 * epsilon_ * epsilon_;
        }
    }

private:
    RbfFamily family_;
    double epsilon_;
};

inline double eval(const RbfKind& kind, Point2 center, Point2 p) { return kind.eval(center, p); }

inline double dir2(const RbfKind& kind, Point2 center, Point2 p, const Direction& d) {
    return kind.dir2(center, p, d);
}

}  // namespace fracdq
