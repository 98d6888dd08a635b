#pragma once

#include "fracdq/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

namespace fracdq {

/// Condition estimate above which results are reported as unreliable.
inline constexpr double kConditionWarning = 1e12;

/// LU with partial pivoting, factored once and reused for any number of
/// right-hand sides. The condition estimate is the reciprocal of the 1-norm
/// reciprocal-condition estimate of the factorization.
class DenseLu {
public:
    DenseLu() = default;

    explicit DenseLu(const Eigen::MatrixXd& a, std::string what = "matrix") : what_(std::move(what)) {
        if (a.rows() != a.cols()) {
            throw InvalidInput(what_ + " must be square");
        }
        if (!a.allFinite()) {
            throw SingularMatrixError(what_ + " has non-finite entries",
                                      std::numeric_limits<double>::infinity());
        }
        lu_.compute(a);
        const double rcond = lu_.rcond();
        condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        const auto& u = lu_.matrixLU();
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            if (u(i, i) == 0.0 || !std::isfinite(u(i, i))) {
                throw SingularMatrixError(what_ + " is singular", condition_);
            }
        }
        if (!std::isfinite(condition_)) {
            throw SingularMatrixError(what_ + " is numerically singular", condition_);
        }
    }

    double condition_estimate() const noexcept { return condition_; }

    template <typename Rhs>
    Eigen::MatrixXd solve(const Rhs& rhs) const {
        Eigen::MatrixXd x = lu_.solve(rhs);
        if (!x.allFinite()) {
            throw SingularMatrixError(what_ + " solve produced non-finite values", condition_);
        }
        return x;
    }

private:
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double condition_ = 1.0;
    std::string what_;
};

}  // namespace fracdq
