#include "nlkm/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace nlkm;

TEST(MakeGrid, ReferenceGridSpacing) {
    const GridSpec g = make_grid(20.0, 20.0, 150, 150);
    EXPECT_EQ(g.hx, 20.0 / 150.0);
    EXPECT_EQ(g.hy, 20.0 / 150.0);
    EXPECT_NEAR(g.hx, 0.1333333333333333, 1e-15);
}

TEST(MakeGrid, SmallestLegalGrid) {
    const GridSpec g = make_grid(1.0, 1.0, 3, 3);
    EXPECT_EQ(g.hx, 1.0 / 3.0);
    EXPECT_NEAR(g.cell_x(0), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(g.cell_x(1), 0.5, 1e-15);
    EXPECT_NEAR(g.cell_x(2), 5.0 / 6.0, 1e-15);
}

TEST(MakeGrid, RectangularDomainArithmetic) {
    const GridSpec g = make_grid(20.0, 10.0, 100, 50);
    EXPECT_EQ(g.hx, 0.2);
    EXPECT_EQ(g.hy, 0.2);
}

TEST(MakeGrid, RejectsBadArguments) {
    EXPECT_THROW(make_grid(0.0, 1.0, 10, 10), std::invalid_argument);
    EXPECT_THROW(make_grid(1.0, -1.0, 10, 10), std::invalid_argument);
    EXPECT_THROW(make_grid(1.0, 1.0, 2, 10), std::invalid_argument);
    EXPECT_THROW(make_grid(1.0, 1.0, 10, 2), std::invalid_argument);
}

TEST(MakeGrid, CentersSymmetricAboutMidpoint) {
    const GridSpec g = make_grid(20.0, 7.0, 31, 17);
    for (int i = 0; i < g.nx; ++i)
        EXPECT_NEAR(g.cell_x(i) + g.cell_x(g.nx - 1 - i), g.lx, 1e-12 * g.lx);
    for (int j = 0; j < g.ny; ++j)
        EXPECT_NEAR(g.cell_y(j) + g.cell_y(g.ny - 1 - j), g.ly, 1e-12 * g.ly);
}

TEST(Field, IndexRoundTrip) {
    const GridSpec g = make_grid(1.0, 1.0, 7, 5);
    Field f(g);
    ASSERT_EQ(f.values.size(), 35u);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t flat = static_cast<std::size_t>(j) * g.nx + i;
            f.values[flat] = 100.0 * i + j;
            EXPECT_EQ(f.at(i, j), 100.0 * i + j);
        }
}

TEST(InitialConditions, SpecialAngleValue) {
    // Grid chosen so a cell center sits at (x, y) = (pi, 2): sin(x)sin(y) ~ 0
    // and cos(pi*y) = 1, hence w0 = 2*pi + 1 up to the roundoff of sin(pi).
    constexpr double pi = 3.14159265358979323846;
    const GridSpec g = make_grid(2.0 * pi, 12.0, 3, 3);
    const auto [n0, w0] = eval_initial_conditions(g);
    EXPECT_NEAR(g.cell_x(1), pi, 1e-15);
    EXPECT_NEAR(g.cell_y(0), 2.0, 1e-15);
    EXPECT_NEAR(w0.at(1, 0), 2.0 * pi + 1.0, 1e-12);
}

TEST(InitialConditions, RangesOnReferenceGrid) {
    constexpr double pi = 3.14159265358979323846;
    const GridSpec g = make_grid(20.0, 20.0, 150, 150);
    const auto [n0, w0] = eval_initial_conditions(g);
    EXPECT_GE(min_value(n0), 1.0);
    EXPECT_LE(max_value(n0), 2.0);
    EXPECT_GE(min_value(w0), 2.0 * pi - pi - 1.0);
    EXPECT_LE(max_value(w0), 2.0 * pi + pi + 1.0);
    EXPECT_GT(min_value(w0), 0.0);
    EXPECT_LE(linf_norm(w0), 10.4249);
}

TEST(InitialConditions, PureFunctionOfCoordinates) {
    const GridSpec g = make_grid(20.0, 20.0, 41, 37);
    const auto [n0, w0] = eval_initial_conditions(g);
    constexpr double pi = 3.14159265358979323846;
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick_i(0, g.nx - 1), pick_j(0, g.ny - 1);
    for (int trial = 0; trial < 200; ++trial) {
        const int i = pick_i(rng), j = pick_j(rng);
        const double x = g.cell_x(i), y = g.cell_y(j);
        EXPECT_EQ(n0.at(i, j), 1.5 + 0.5 * std::sin(y) * std::cos(x));
        EXPECT_EQ(w0.at(i, j), 2.0 * pi + pi * std::sin(x) * std::sin(y) + std::cos(pi * y));
    }
}

TEST(LinfNorm, Examples) {
    const GridSpec g = make_grid(1.0, 1.0, 4, 4);
    Field c(g, -3.25);
    EXPECT_EQ(linf_norm(c), 3.25);
    Field z(g, 0.0);
    z.at(2, 1) = -7.0;
    EXPECT_EQ(linf_norm(z), 7.0);
}
