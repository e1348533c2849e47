// Zero-padded fast convolution of a field with a fixed even stencil, the
// engine behind the accelerated nonlocal operator. Out-of-domain samples are
// treated as zero, which is exactly the boundary clipping of the quadrature.
#pragma once

#include "nlkm/grid.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlkm {

namespace detail {

/// Smallest m >= n with no prime factor beyond 7 (fast FFTW sizes).
inline int next_fast_size(int n) {
    if (n < 1) return 1;
    for (int m = n;; ++m) {
        int r = m;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

struct FftwPlan {
    fftw_plan plan = nullptr;
    FftwPlan() = default;
    explicit FftwPlan(fftw_plan p) : plan(p) {}
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
    FftwPlan(FftwPlan&& o) noexcept : plan(o.plan) { o.plan = nullptr; }
    FftwPlan& operator=(FftwPlan&& o) noexcept {
        if (this != &o) {
            if (plan) fftw_destroy_plan(plan);
            plan = o.plan;
            o.plan = nullptr;
        }
        return *this;
    }
    ~FftwPlan() {
        if (plan) fftw_destroy_plan(plan);
    }
};

template <typename T>
struct FftwBuffer {
    T* data = nullptr;
    explicit FftwBuffer(std::size_t count)
        : data(static_cast<T*>(fftw_malloc(sizeof(T) * count))) {
        if (!data) throw std::bad_alloc();
    }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    ~FftwBuffer() {
        if (data) fftw_free(data);
    }
};

}  // namespace detail

/// Precomputed plan + kernel spectrum for repeated applications on one grid.
/// The stencil must be even in its offset, W(dx,dy) == W(-dx,-dy); with that,
/// correlate() computes sum_d W(d) * z(x+d) restricted to the domain.
class FftConvolver {
public:
    FftConvolver(const GridSpec& grid, int kx, int ky, std::span<const double> stencil)
        : grid_(grid), kx_(kx), ky_(ky) {
        const int wx = 2 * kx + 1, wy = 2 * ky + 1;
        if (stencil.size() != static_cast<std::size_t>(wx) * wy)
            throw std::invalid_argument("FftConvolver: stencil size does not match half-widths");
        if (kx >= grid.nx || ky >= grid.ny)
            throw std::invalid_argument("FftConvolver: stencil half-width exceeds the grid");
        px_ = detail::next_fast_size(grid.nx + kx);
        py_ = detail::next_fast_size(grid.ny + ky);
        cols_ = px_ / 2 + 1;

        detail::FftwBuffer<double> real(static_cast<std::size_t>(px_) * py_);
        detail::FftwBuffer<std::complex<double>> spec(static_cast<std::size_t>(cols_) * py_);
        fwd_ = detail::FftwPlan(fftw_plan_dft_r2c_2d(
            py_, px_, real.data, reinterpret_cast<fftw_complex*>(spec.data), FFTW_ESTIMATE));
        inv_ = detail::FftwPlan(fftw_plan_dft_c2r_2d(
            py_, px_, reinterpret_cast<fftw_complex*>(spec.data), real.data, FFTW_ESTIMATE));
        if (!fwd_.plan || !inv_.plan)
            throw std::runtime_error("FftConvolver: FFTW plan creation failed");

        // Kernel image with offsets wrapped periodically; its transform is
        // prescaled by 1/(px*py) so the round trip needs no extra pass.
        std::memset(real.data, 0, sizeof(double) * px_ * py_);
        for (int dy = -ky; dy <= ky; ++dy) {
            const int row = (dy + py_) % py_;
            for (int dx = -kx; dx <= kx; ++dx) {
                const int col = (dx + px_) % px_;
                real.data[static_cast<std::size_t>(row) * px_ + col] =
                    stencil[static_cast<std::size_t>(dy + ky) * wx + (dx + kx)];
            }
        }
        fftw_execute_dft_r2c(fwd_.plan, real.data, reinterpret_cast<fftw_complex*>(spec.data));
        kernel_spec_.assign(spec.data, spec.data + static_cast<std::size_t>(cols_) * py_);
        const double scale = 1.0 / (static_cast<double>(px_) * py_);
        for (auto& c : kernel_spec_) c *= scale;
    }

    /// (W * z)(x) = sum over stencil offsets of W(d) z(x+d), zero outside the domain.
    Field correlate(const Field& z) const {
        if (!(z.grid == grid_))
            throw std::invalid_argument("FftConvolver::correlate: field grid mismatch");
        const int nx = grid_.nx, ny = grid_.ny;
        detail::FftwBuffer<double> real(static_cast<std::size_t>(px_) * py_);
        detail::FftwBuffer<std::complex<double>> spec(static_cast<std::size_t>(cols_) * py_);

        std::memset(real.data, 0, sizeof(double) * px_ * py_);
        for (int j = 0; j < ny; ++j)
            std::memcpy(real.data + static_cast<std::size_t>(j) * px_,
                        z.values.data() + static_cast<std::size_t>(j) * nx, sizeof(double) * nx);

        fftw_execute_dft_r2c(fwd_.plan, real.data, reinterpret_cast<fftw_complex*>(spec.data));
        const std::size_t m = static_cast<std::size_t>(cols_) * py_;
        for (std::size_t k = 0; k < m; ++k) spec.data[k] *= kernel_spec_[k];
        fftw_execute_dft_c2r(inv_.plan, reinterpret_cast<fftw_complex*>(spec.data), real.data);

        Field out(grid_);
        for (int j = 0; j < ny; ++j)
            std::memcpy(out.values.data() + static_cast<std::size_t>(j) * nx,
                        real.data + static_cast<std::size_t>(j) * px_, sizeof(double) * nx);
        return out;
    }

    int padded_nx() const { return px_; }
    int padded_ny() const { return py_; }

private:
    GridSpec grid_;
    int kx_, ky_;
    int px_ = 0, py_ = 0, cols_ = 0;
    detail::FftwPlan fwd_, inv_;
    std::vector<std::complex<double>> kernel_spec_;
};

}  // namespace nlkm
