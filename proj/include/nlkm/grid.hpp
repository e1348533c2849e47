// Uniform cell-centered grid on a rectangular domain and scalar fields on it.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlkm {

/// Cell-centered discretization of [0,lx]x[0,ly] into nx*ny cells.
/// Cell centers are x_i = (i + 1/2)*hx, y_j = (j + 1/2)*hy.
struct GridSpec {
    double lx = 0.0, ly = 0.0;
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;

    double cell_x(int i) const { return (i + 0.5) * hx; }
    double cell_y(int j) const { return (j + 0.5) * hy; }
    std::int64_t cell_count() const { return static_cast<std::int64_t>(nx) * ny; }
    double area() const { return lx * ly; }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.lx == b.lx && a.ly == b.ly && a.nx == b.nx && a.ny == b.ny;
    }
};

inline GridSpec make_grid(double lx, double ly, int nx, int ny) {
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("make_grid: domain extents must be positive");
    if (nx < 3 || ny < 3)
        throw std::invalid_argument("make_grid: nx and ny must be at least 3");
    GridSpec g;
    g.lx = lx;
    g.ly = ly;
    g.nx = nx;
    g.ny = ny;
    g.hx = lx / nx;
    g.hy = ly / ny;
    return g;
}

/// Scalar samples at cell centers, row-major with x fastest: index (i,j) -> j*nx + i.
struct Field {
    GridSpec grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const GridSpec& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.cell_count()), fill) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }

    std::size_t size() const { return values.size(); }
};

inline bool same_grid(const Field& a, const Field& b) { return a.grid == b.grid; }

inline void require_same_grid(const Field& a, const Field& b, const char* who) {
    if (!same_grid(a, b)) throw std::invalid_argument(std::string(who) + ": fields live on different grids");
}

inline double linf_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

inline double min_value(const Field& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double v : f.values) m = std::min(m, v);
    return m;
}

inline double max_value(const Field& f) {
    double m = f.values.empty() ? 0.0 : f.values[0];
    for (double v : f.values) m = std::max(m, v);
    return m;
}

/// Midpoint-rule integral over the domain.
inline double integral(const Field& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.hx * f.grid.hy;
}

inline bool all_finite(const Field& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Vegetation / water starting profiles evaluated at cell centers:
///   n0(x,y) = 1.5 + 0.5 sin(y) cos(x)
///   w0(x,y) = 2*pi + pi sin(x) sin(y) + cos(pi*y)
inline std::pair<Field, Field> eval_initial_conditions(const GridSpec& g) {
    constexpr double pi = 3.14159265358979323846;
    Field n0(g), w0(g);
    for (int j = 0; j < g.ny; ++j) {
        const double y = g.cell_y(j);
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.cell_x(i);
            n0.at(i, j) = 1.5 + 0.5 * std::sin(y) * std::cos(x);
            w0.at(i, j) = 2.0 * pi + pi * std::sin(x) * std::sin(y) + std::cos(pi * y);
        }
    }
    return {std::move(n0), std::move(w0)};
}

}  // namespace nlkm
