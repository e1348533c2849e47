// Discrete nonlocal dispersal operator: a symmetric nonnegative stencil of
// midpoint-quadrature weights for the interaction kernel, the per-cell
// boundary-clipped mass m(x) = sum_{y in domain} phi(x,y) hx hy, and the two
// application paths (direct clipped summation and FFT-accelerated).
//
// The operator is (Gamma z)(x) = sum_{y in domain} phi(x,y) (z(y) - z(x)) hx hy
//                             = (phi * z)(x) - z(x) m(x),
// with the kernel clipped at the boundary: nothing is mirrored or renormalized.
#pragma once

#include "nlkm/fftconv.hpp"
#include "nlkm/grid.hpp"
#include "nlkm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlkm {

struct KernelSpec {
    double sigma = 1.0;         // Gaussian standard deviation (length units)
    double cutoff_radii = 4.0;  // truncation radius in multiples of sigma
};

class DiscreteKernel {
public:
    /// Wraps an explicit stencil of quadrature weights. The stencil block is
    /// (2*ky+1) rows by (2*kx+1) columns, row-major over the y offset. Every
    /// weight must be nonnegative and even in its offset.
    static DiscreteKernel from_stencil(const GridSpec& grid, int kx, int ky,
                                       std::vector<double> stencil) {
        const int wx = 2 * kx + 1, wy = 2 * ky + 1;
        if (kx < 0 || ky < 0 || kx >= grid.nx || ky >= grid.ny)
            throw std::invalid_argument("DiscreteKernel: stencil wider than the grid");
        if (stencil.size() != static_cast<std::size_t>(wx) * wy)
            throw std::invalid_argument("DiscreteKernel: stencil size mismatch");
        for (int dy = -ky; dy <= ky; ++dy)
            for (int dx = -kx; dx <= kx; ++dx) {
                const double w = stencil[static_cast<std::size_t>(dy + ky) * wx + (dx + kx)];
                const double w_opp = stencil[static_cast<std::size_t>(-dy + ky) * wx + (-dx + kx)];
                if (w < 0.0) throw std::invalid_argument("DiscreteKernel: negative stencil weight");
                if (w != w_opp) throw std::invalid_argument("DiscreteKernel: stencil is not even");
            }
        return DiscreteKernel(grid, kx, ky, std::move(stencil));
    }

    const GridSpec& grid() const { return grid_; }
    int half_width_x() const { return kx_; }
    int half_width_y() const { return ky_; }
    std::span<const double> stencil() const { return stencil_; }
    double weight(int dx, int dy) const {
        return stencil_[static_cast<std::size_t>(dy + ky_) * (2 * kx_ + 1) + (dx + kx_)];
    }
    const Field& boundary_mass() const { return boundary_mass_; }
    double lambda_disc() const { return lambda_disc_; }

private:
    DiscreteKernel(const GridSpec& grid, int kx, int ky, std::vector<double> stencil)
        : grid_(grid), kx_(kx), ky_(ky), stencil_(std::move(stencil)), boundary_mass_(grid) {
        compute_boundary_mass();
    }

    // m(i,j) is a rectangle sum over the in-domain part of the stencil,
    // evaluated from 2D prefix sums so every cell sees one summation order.
    void compute_boundary_mass() {
        const int wx = 2 * kx_ + 1, wy = 2 * ky_ + 1;
        std::vector<double> cum(static_cast<std::size_t>(wy + 1) * (wx + 1), 0.0);
        const auto c_at = [&](int r, int c) -> double& {
            return cum[static_cast<std::size_t>(r) * (wx + 1) + c];
        };
        for (int r = 0; r < wy; ++r)
            for (int c = 0; c < wx; ++c)
                c_at(r + 1, c + 1) = stencil_[static_cast<std::size_t>(r) * wx + c] +
                                     c_at(r, c + 1) + c_at(r + 1, c) - c_at(r, c);
        for (int j = 0; j < grid_.ny; ++j) {
            const int r1 = std::max(-ky_, -j) + ky_;
            const int r2 = std::min(ky_, grid_.ny - 1 - j) + ky_;
            for (int i = 0; i < grid_.nx; ++i) {
                const int c1 = std::max(-kx_, -i) + kx_;
                const int c2 = std::min(kx_, grid_.nx - 1 - i) + kx_;
                boundary_mass_.at(i, j) =
                    c_at(r2 + 1, c2 + 1) - c_at(r1, c2 + 1) - c_at(r2 + 1, c1) + c_at(r1, c1);
            }
        }
        lambda_disc_ = max_value(boundary_mass_);
    }

    GridSpec grid_;
    int kx_, ky_;
    std::vector<double> stencil_;
    Field boundary_mass_;
    double lambda_disc_ = 0.0;
};

/// Midpoint quadrature of the mean-zero Gaussian with standard deviation
/// sigma, truncated at Euclidean radius cutoff_radii*sigma. Weight at offset
/// (dx,dy) is G_sigma(dx*hx, dy*hy) * hx * hy.
inline DiscreteKernel build_kernel(const GridSpec& grid, const KernelSpec& spec) {
    constexpr double pi = 3.14159265358979323846;
    if (!(spec.sigma > 0.0))
        throw std::invalid_argument("build_kernel: sigma must be positive");
    if (!(spec.cutoff_radii >= 1.0))
        throw std::invalid_argument("build_kernel: cutoff_radii must be at least 1");
    const double radius = spec.cutoff_radii * spec.sigma;
    if (!(radius < std::min(grid.lx, grid.ly)))
        throw std::invalid_argument("build_kernel: truncated stencil is wider than the domain");

    // Offsets beyond nx-1 (ny-1) can never pair two in-domain cells.
    const int kx = std::min(static_cast<int>(std::ceil(radius / grid.hx)), grid.nx - 1);
    const int ky = std::min(static_cast<int>(std::ceil(radius / grid.hy)), grid.ny - 1);
    const int wx = 2 * kx + 1;
    const double inv_two_sigma2 = 1.0 / (2.0 * spec.sigma * spec.sigma);
    const double norm = 1.0 / (2.0 * pi * spec.sigma * spec.sigma);
    const double cell_area = grid.hx * grid.hy;
    const double r2_max = radius * radius;

    std::vector<double> stencil(static_cast<std::size_t>(wx) * (2 * ky + 1), 0.0);
    for (int dy = -ky; dy <= ky; ++dy) {
        const double y = dy * grid.hy;
        for (int dx = -kx; dx <= kx; ++dx) {
            const double x = dx * grid.hx;
            const double r2 = x * x + y * y;
            if (r2 <= r2_max)
                stencil[static_cast<std::size_t>(dy + ky) * wx + (dx + kx)] =
                    norm * std::exp(-r2 * inv_two_sigma2) * cell_area;
        }
    }
    return DiscreteKernel::from_stencil(grid, kx, ky, std::move(stencil));
}

/// Literal clipped double sum, in difference form: each term is
/// W(d) * (z(x+d) - z(x)), so constants map to exact zero and the value at a
/// global minimum is a sum of nonnegative terms. Fixed per-cell summation
/// order (y offset outer, x offset inner); this is the oracle path.
inline Field apply_nonlocal_direct(const DiscreteKernel& k, const Field& z) {
    if (!(z.grid == k.grid()))
        throw std::invalid_argument("apply_nonlocal_direct: field grid mismatch");
    const GridSpec& g = k.grid();
    const int nx = g.nx, ny = g.ny, kx = k.half_width_x(), ky = k.half_width_y();
    const int wx = 2 * kx + 1;
    const double* w = k.stencil().data();
    Field out(g);
    parallel_for(ny, [&](std::int64_t jb, std::int64_t je) {
        for (int j = static_cast<int>(jb); j < static_cast<int>(je); ++j) {
            const int dy_lo = std::max(-ky, -j), dy_hi = std::min(ky, ny - 1 - j);
            for (int i = 0; i < nx; ++i) {
                const int dx_lo = std::max(-kx, -i), dx_hi = std::min(kx, nx - 1 - i);
                const double zc = z.at(i, j);
                double acc = 0.0;
                for (int dy = dy_lo; dy <= dy_hi; ++dy) {
                    const double* wrow = w + static_cast<std::size_t>(dy + ky) * wx + kx;
                    const double* zrow = z.values.data() + static_cast<std::size_t>(j + dy) * nx + i;
                    double row_acc = 0.0;
                    for (int dx = dx_lo; dx <= dx_hi; ++dx)
                        row_acc += wrow[dx] * (zrow[dx] - zc);
                    acc += row_acc;
                }
                out.at(i, j) = acc;
            }
        }
    }, 4);
    return out;
}

/// (phi * z) - z .* m with the convolution done by zero-padded FFT.
inline Field apply_nonlocal_fft(const FftConvolver& conv, const DiscreteKernel& k, const Field& z) {
    Field out = conv.correlate(z);
    const Field& m = k.boundary_mass();
    for (std::size_t idx = 0; idx < out.values.size(); ++idx)
        out.values[idx] -= z.values[idx] * m.values[idx];
    return out;
}

/// One-shot FFT application; builds a transient plan. Steppers keep a
/// persistent FftConvolver instead.
inline Field apply_nonlocal_fft(const DiscreteKernel& k, const Field& z) {
    FftConvolver conv(k.grid(), k.half_width_x(), k.half_width_y(), k.stencil());
    return apply_nonlocal_fft(conv, k, z);
}

/// Domain integral of Gamma z by midpoint rule; vanishes up to roundoff by
/// the evenness of the stencil.
inline double integral_of_gamma(const DiscreteKernel& k, const Field& z) {
    return integral(apply_nonlocal_direct(k, z));
}

}  // namespace nlkm
