// Local spatial operators: five-point Laplacian with homogeneous Neumann
// boundaries (mirrored ghost cells) and first-order upwind advection in +x.
#pragma once

#include "nlkm/grid.hpp"
#include "nlkm/parallel.hpp"

#include <stdexcept>

namespace nlkm {

/// (z_E + z_W + z_N + z_S - 4 z_C) / h^2 with ghost cells mirrored across each
/// boundary face (z_ghost = z_interior), so the discrete normal derivative
/// vanishes. Evaluated in difference form; a constant field maps to exact zero.
inline Field laplacian_neumann(const Field& z) {
    const GridSpec& g = z.grid;
    if (g.hx != g.hy)
        throw std::invalid_argument("laplacian_neumann: requires hx == hy");
    const double inv_h2 = 1.0 / (g.hx * g.hx);
    const int nx = g.nx, ny = g.ny;
    Field out(g);
    parallel_for(ny, [&](std::int64_t jb, std::int64_t je) {
        for (int j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
            const int jn = (j + 1 < ny) ? j + 1 : j;  // mirrored ghost == cell itself
            const int js = (j > 0) ? j - 1 : j;
            for (int i = 0; i < nx; ++i) {
                const int ie = (i + 1 < nx) ? i + 1 : i;
                const int iw = (i > 0) ? i - 1 : i;
                const double c = z.at(i, j);
                const double s = (z.at(ie, j) - c) + (z.at(iw, j) - c) +
                                 (z.at(i, jn) - c) + (z.at(i, js) - c);
                out.at(i, j) = s * inv_h2;
            }
        }
    }, 8);
    return out;
}

/// v * dz/dx by the one-sided difference (z_{i+1} - z_i)/hx; with +v*grad(w) on
/// the right-hand side information travels in -x, so the east neighbor is the
/// upwind one. The east boundary column uses the mirrored ghost (zero gradient).
inline Field advection_x(const Field& z, double v) {
    if (v < 0.0)
        throw std::invalid_argument("advection_x: v must be nonnegative");
    const GridSpec& g = z.grid;
    const double v_over_hx = v / g.hx;
    const int nx = g.nx, ny = g.ny;
    Field out(g);
    parallel_for(ny, [&](std::int64_t jb, std::int64_t je) {
        for (int j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
            for (int i = 0; i + 1 < nx; ++i)
                out.at(i, j) = (z.at(i + 1, j) - z.at(i, j)) * v_over_hx;
            out.at(nx - 1, j) = 0.0;  // ghost mirrors the boundary cell
        }
    }, 8);
    return out;
}

}  // namespace nlkm
