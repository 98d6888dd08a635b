#include "fracdq/nodes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

using namespace fracdq;

namespace {

void expect_partition(const NodeSet& n) {
    std::set<std::size_t> seen;
    for (auto i : n.interior_idx) EXPECT_TRUE(seen.insert(i).second);
    for (auto i : n.boundary_idx) EXPECT_TRUE(seen.insert(i).second);
    EXPECT_EQ(seen.size(), n.size());
    if (!seen.empty()) {
        EXPECT_EQ(*seen.rbegin(), n.size() - 1);
    }
}

// Location recomputed with an independent distance test for the named domains.
void expect_classified(const NodeSet& n, const Domain& d) {
    for (std::size_t i = 0; i < n.size(); ++i) {
        const Location loc = classify(d, n.points[i]);
        ASSERT_NE(loc, Location::Exterior) << i;
        EXPECT_EQ(loc == Location::Boundary, n.is_boundary(i)) << i;
    }
}

}  // namespace

TEST(Chebyshev, Examples) {
    const NodeSet a = chebyshev_1d(0, 1, 2);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_DOUBLE_EQ(a.points[0].x, 0.0);
    EXPECT_NEAR(a.points[1].x, 0.5, 1e-16);
    EXPECT_DOUBLE_EQ(a.points[2].x, 1.0);
    EXPECT_NEAR(chebyshev_1d(0, 1, 4).points[1].x, 0.146446609406726, 1e-15);
    const NodeSet b = chebyshev_1d(2, 4, 2);
    EXPECT_DOUBLE_EQ(b.points[0].x, 2.0);
    EXPECT_NEAR(b.points[1].x, 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(b.points[2].x, 4.0);
    EXPECT_EQ(b.boundary_idx, (std::vector<std::size_t>{0, 2}));
    EXPECT_THROW(chebyshev_1d(0, 1, 1), InvalidInput);
}

TEST(Chebyshev, SymmetricAboutMidpoint) {
    for (int M : {5, 10, 25}) {
        const NodeSet n = chebyshev_1d(-1, 3, M);
        for (int j = 0; j <= M; ++j) EXPECT_NEAR(n.points[j].x + n.points[M - j].x, 2.0, 1e-12);
        expect_partition(n);
    }
}

TEST(Grid, SquareTargetNine) {
    const NodeSet n = grid_2d(Domain::unit_square(), 9);
    EXPECT_EQ(n.size(), 9u);
    EXPECT_EQ(n.boundary_idx.size(), 8u);
    EXPECT_EQ(n.interior_idx.size(), 1u);
    EXPECT_EQ(n.points[n.interior_idx[0]], (Point2{0.5, 0.5}));
}

TEST(Grid, SquareLatticesMatchReferenceCounts) {
    // n x n lattices of the unit square give 99, 195, 288 and 440 as M.
    for (int n : {10, 14, 17, 21}) {
        const NodeSet s = grid_2d(Domain::unit_square(), n * n);
        EXPECT_EQ(s.size(), static_cast<std::size_t>(n * n));
        EXPECT_EQ(s.boundary_idx.size(), static_cast<std::size_t>(4 * (n - 1)));
        expect_partition(s);
        expect_classified(s, Domain::unit_square());
    }
}

TEST(Grid, DiskContainment) {
    const NodeSet n = grid_2d(Domain::unit_disk(), 21);
    for (auto p : n.points) {
        EXPECT_LE((p.x - 0.5) * (p.x - 0.5) + (p.y - 0.5) * (p.y - 0.5), 0.25 + 1e-10);
    }
    expect_partition(n);
}

TEST(Grid, TrapezoidNearTarget) {
    const Domain d = Domain::trapezoid();
    const NodeSet n = grid_2d(d, 66);
    EXPECT_NEAR(static_cast<double>(n.size()), 66.0, 6.6);
    expect_partition(n);
    expect_classified(n, d);
    EXPECT_NO_THROW(validate(n, d));
}

TEST(Grid, Errors) {
    EXPECT_THROW(grid_2d(Domain::interval(0, 1), 10), InvalidInput);
    EXPECT_THROW(grid_2d(Domain::unit_square(), 3), InvalidInput);
}

TEST(Scattered, SeparationFloorAndCount) {
    const Domain sq = Domain::unit_square();
    const NodeSet n = scattered_2d(sq, 74, 1);
    EXPECT_EQ(n.size(), 74u);
    EXPECT_GE(min_pairwise_distance(n.points), 0.5 / std::sqrt(74.0) * sq.diameter());
    expect_partition(n);
    expect_classified(n, sq);
}

TEST(Scattered, Deterministic) {
    const NodeSet a = scattered_2d(Domain::unit_square(), 74, 1);
    const NodeSet b = scattered_2d(Domain::unit_square(), 74, 1);
    EXPECT_EQ(a.points, b.points);
    EXPECT_EQ(a.boundary_idx, b.boundary_idx);
    const NodeSet c = scattered_2d(Domain::unit_square(), 74, 2);
    EXPECT_NE(a.points, c.points);
}

TEST(Scattered, CatalogDomains) {
    struct Case {
        Domain d;
        int target;
    };
    for (const auto& [d, target] : {Case{Domain::l_shape(), 593}, Case{Domain::trapezoid(), 171},
                                    Case{Domain::unit_disk(), 402}, Case{Domain::unit_square(), 424}}) {
        const NodeSet n = scattered_2d(d, target, 1);
        EXPECT_EQ(n.size(), static_cast<std::size_t>(target));
        expect_partition(n);
        expect_classified(n, d);
        EXPECT_GE(min_pairwise_distance(n.points), 0.5 / std::sqrt(double(target)) * d.diameter());
        EXPECT_GT(n.boundary_idx.size(), 8u);
    }
}

TEST(Scattered, UnreachableTargetReportsCount) {
    EXPECT_THROW(scattered_2d(Domain::unit_square(), 5, 1), InvalidInput);
    // A thin strip has no room for interior points at the separation floor.
    const Domain strip = Domain::polygon({{0, 0}, {4, 0}, {4, 0.02}, {0, 0.02}});
    try {
        scattered_2d(strip, 60, 1);
        FAIL() << "expected an error";
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("achieved"), std::string::npos) << e.what();
    }
}

TEST(RadicalInverse, Base2And3) {
    EXPECT_DOUBLE_EQ(radical_inverse(1, 2), 0.5);
    EXPECT_DOUBLE_EQ(radical_inverse(3, 2), 0.75);
    EXPECT_DOUBLE_EQ(radical_inverse(1, 3), 1.0 / 3.0);
    EXPECT_NEAR(radical_inverse(5, 3), 7.0 / 9.0, 2.5e-16);
}

TEST(NodeFile, RoundTrip) {
    const Domain d = Domain::l_shape();
    const NodeSet n = scattered_2d(d, 120, 4);
    std::stringstream ss;
    save_nodes(ss, n);
    EXPECT_EQ(ss.str().rfind("# fracdq nodes v1\n", 0), 0u);
    const NodeSet back = parse_nodes(ss, d);
    EXPECT_EQ(back.points, n.points);
    EXPECT_EQ(back.interior_idx, n.interior_idx);
    EXPECT_EQ(back.boundary_idx, n.boundary_idx);
}

TEST(NodeFile, SingleInteriorPoint) {
    std::istringstream in("# comment\n0.5 0.5 interior\n");
    const NodeSet n = parse_nodes(in, Domain::unit_square());
    EXPECT_EQ(n.size(), 1u);
    EXPECT_EQ(n.interior_idx.size(), 1u);
}

TEST(NodeFile, Errors) {
    {
        std::istringstream in("2.0 0.0 interior\n");
        try {
            parse_nodes(in, Domain::unit_square());
            FAIL();
        } catch (const InvalidInput& e) {
            EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
        }
    }
    {
        std::istringstream in("0.5 0.5 interior\n0.1 abc boundary\n");
        try {
            parse_nodes(in, Domain::unit_square());
            FAIL();
        } catch (const ParseError& e) {
            EXPECT_EQ(e.line(), 2u);
        }
    }
    {
        std::istringstream in("0.5 0.5 inside\n");
        EXPECT_THROW(parse_nodes(in, Domain::unit_square()), ParseError);
    }
    {
        // flag disagrees with the geometry
        std::istringstream in("0.5 0.5 boundary\n");
        EXPECT_THROW(parse_nodes(in, Domain::unit_square()), InvalidInput);
    }
    {
        std::istringstream in("0.5 0.5 interior\n0.5 0.5 interior\n");
        EXPECT_THROW(parse_nodes(in, Domain::unit_square()), InvalidInput);
    }
    EXPECT_THROW(load_nodes("/nonexistent/nodes.txt", Domain::unit_square()), InvalidInput);
}
