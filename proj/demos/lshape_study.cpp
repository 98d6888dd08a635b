// Three-direction problem on the L-shaped domain: error against the order
// for each kernel on one scattered node set.
//
// usage: lshape_study [node count] [time steps]

#include "fracdq/fracdq.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    using namespace fracdq;
    const int count = argc > 1 ? std::atoi(argv[1]) : 593;
    const int steps = argc > 2 ? std::atoi(argv[2]) : 1000;
    const NodeSet nodes = scattered_2d(Domain::l_shape(), count, 1);
    std::printf("%zu nodes (%zu on the boundary), N = %d\n", nodes.size(), nodes.boundary_idx.size(), steps);
    std::printf("%5s %4s %12s %12s %10s\n", "alpha", "rbf", "e2", "einf", "cond");
    for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
        const BenchmarkCase c = cases::l_shape(alpha);
        for (RbfFamily f : {RbfFamily::Multiquadric, RbfFamily::InverseMultiquadric, RbfFamily::Gaussian}) {
            const std::string name(short_name(f));
            const double eps = c.shapes.at(f).epsilon_for(static_cast<int>(nodes.size()) - 1);
            try {
                const PdeResult r = run_pde_case(c, RbfKind(f, eps), nodes, steps);
                std::printf("%5.1f %4s %12.4e %12.4e %10.2e\n", alpha, name.c_str(), r.norms.e2, r.norms.einf,
                            r.worst_condition());
            } catch (const SingularMatrixError& e) {
                std::printf("%5.1f %4s singular (%s)\n", alpha, name.c_str(), e.what());
            }
        }
    }
}
