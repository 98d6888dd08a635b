// Errors of the fractional derivative of (1 - x)^3 on Chebyshev nodes for
// the three kernels, with the tabulated shape parameters.

#include "fracdq/fracdq.hpp"

#include <cstdio>
#include <string>

int main() {
    using namespace fracdq;
    const DerivativeCase c = cases::power_derivative(1.2, 3.0);
    std::printf("%4s", "M");
    for (RbfFamily f : {RbfFamily::Multiquadric, RbfFamily::InverseMultiquadric, RbfFamily::Gaussian}) {
        const std::string n(short_name(f));
        std::printf("  %9s e2 %9s einf", n.c_str(), n.c_str());
    }
    std::printf("  %10s\n", "cond(ga)");
    for (int M : c.m_list) {
        std::printf("%4d", M);
        double cond = 0.0;
        for (RbfFamily f : {RbfFamily::Multiquadric, RbfFamily::InverseMultiquadric, RbfFamily::Gaussian}) {
            const auto r = run_derivative_case(c, RbfKind(f, c.shapes.at(f).epsilon_for(M)), M);
            std::printf("  %12.4e %12.4e", r.norms.e2, r.norms.einf);
            cond = r.report.condition_estimate;
        }
        std::printf("  %10.2e\n", cond);
    }
}
