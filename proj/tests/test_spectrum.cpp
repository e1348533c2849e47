#include "nlkm/spectrum.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nlkm;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST(PatternMetrics, ConstantFieldHasNoStructure) {
    const GridSpec g = make_grid(20.0, 20.0, 32, 32);
    const PatternMetrics m = pattern_metrics(Field(g, 4.0));
    EXPECT_EQ(m.mean, 4.0);
    EXPECT_EQ(m.stddev, 0.0);
    EXPECT_EQ(m.cv, 0.0);
    EXPECT_EQ(m.peak_mode, 0);
    EXPECT_TRUE(std::isinf(m.dominant_wavelength));
}

TEST(PatternMetrics, TwoLevelFieldCoefficientOfVariation) {
    const GridSpec g = make_grid(20.0, 20.0, 32, 32);
    Field f(g, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx / 2; ++i) f.at(i, j) = 2.0;
    const PatternMetrics m = pattern_metrics(f);
    EXPECT_NEAR(m.mean, 1.0, 1e-14);
    EXPECT_NEAR(m.stddev, 1.0, 1e-14);
    EXPECT_NEAR(m.cv, 1.0, 1e-14);
}

TEST(PatternMetrics, SingleAxisModePeaksAtItsWavelength) {
    const GridSpec g = make_grid(20.0, 20.0, 64, 64);
    Field f(g);
    const int mode = 5;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.at(i, j) = 1.5 + std::sin(2.0 * kPi * mode * g.cell_x(i) / g.lx);
    const PatternMetrics m = pattern_metrics(f);
    EXPECT_EQ(m.peak_mode, mode);
    EXPECT_NEAR(m.dominant_wavelength, g.lx / mode, 1e-12);
}

TEST(PatternMetrics, DiagonalModeBinsByRadius) {
    const GridSpec g = make_grid(20.0, 20.0, 64, 64);
    Field f(g);
    // wavevector (3, 4) has radius 5 in cycle units
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.at(i, j) =
                std::cos(2.0 * kPi * (3.0 * g.cell_x(i) + 4.0 * g.cell_y(j)) / g.lx);
    const PatternMetrics m = pattern_metrics(f);
    EXPECT_EQ(m.peak_mode, 5);
    EXPECT_NEAR(m.dominant_wavelength, 4.0, 1e-12);
}

TEST(RadialPowerSpectrum, RequiresSquareGrid) {
    const GridSpec g = make_grid(20.0, 10.0, 32, 16);
    EXPECT_THROW(radial_power_spectrum(Field(g)), std::invalid_argument);
}
