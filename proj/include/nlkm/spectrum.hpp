// Pattern statistics for final-state fields: coefficient of variation and the
// dominant spatial wavelength from the radially averaged power spectrum.
#pragma once

#include "nlkm/fftconv.hpp"
#include "nlkm/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nlkm {

struct PatternMetrics {
    double mean = 0.0;
    double stddev = 0.0;
    double cv = 0.0;               // stddev / mean, 0 when the mean vanishes
    int peak_mode = 0;             // radial mode index (cycles per domain), 0 if spectrum empty
    double dominant_wavelength = std::numeric_limits<double>::infinity();
};

/// Radially averaged power spectrum over integer radius bins in cycle units;
/// bin 0 is the zero mode. Requires a square grid.
inline std::vector<double> radial_power_spectrum(const Field& f) {
    const GridSpec& g = f.grid;
    if (g.nx != g.ny || g.lx != g.ly)
        throw std::invalid_argument("radial_power_spectrum: requires a square grid");
    const int n = g.nx;
    const int cols = n / 2 + 1;

    detail::FftwBuffer<double> real(static_cast<std::size_t>(n) * n);
    detail::FftwBuffer<std::complex<double>> spec(static_cast<std::size_t>(n) * cols);
    for (std::size_t idx = 0; idx < f.values.size(); ++idx) real.data[idx] = f.values[idx];
    detail::FftwPlan plan(fftw_plan_dft_r2c_2d(n, n, real.data,
                                               reinterpret_cast<fftw_complex*>(spec.data),
                                               FFTW_ESTIMATE));
    fftw_execute(plan.plan);

    const int max_bin = static_cast<int>(std::ceil(std::sqrt(2.0) * (n / 2))) + 1;
    std::vector<double> power(static_cast<std::size_t>(max_bin) + 1, 0.0);
    std::vector<double> count(static_cast<std::size_t>(max_bin) + 1, 0.0);
    for (int ky = 0; ky < n; ++ky) {
        const int fy = (ky <= n / 2) ? ky : ky - n;
        for (int kx = 0; kx < cols; ++kx) {
            // Multiplicity 2 for interior columns of the half-plane layout.
            const double mult = (kx == 0 || (n % 2 == 0 && kx == n / 2)) ? 1.0 : 2.0;
            const double r = std::sqrt(static_cast<double>(fy) * fy + static_cast<double>(kx) * kx);
            const int bin = static_cast<int>(std::lround(r));
            const double p = std::norm(spec.data[static_cast<std::size_t>(ky) * cols + kx]);
            power[bin] += mult * p;
            count[bin] += mult;
        }
    }
    for (std::size_t b = 0; b < power.size(); ++b)
        if (count[b] > 0.0) power[b] /= count[b];
    return power;
}

/// CV plus the wavelength lx / r* where r* is the peak bin of the radially
/// averaged spectrum, zero mode excluded.
inline PatternMetrics pattern_metrics(const Field& f) {
    PatternMetrics m;
    const std::size_t cells = f.values.size();
    if (cells == 0) return m;
    double sum = 0.0;
    for (double v : f.values) sum += v;
    m.mean = sum / static_cast<double>(cells);
    double ss = 0.0;
    for (double v : f.values) {
        const double d = v - m.mean;
        ss += d * d;
    }
    m.stddev = std::sqrt(ss / static_cast<double>(cells));
    m.cv = (std::abs(m.mean) > 1e-300) ? m.stddev / std::abs(m.mean) : 0.0;

    const std::vector<double> power = radial_power_spectrum(f);
    double best = 0.0;
    for (std::size_t b = 1; b < power.size(); ++b) {
        if (power[b] > best) {
            best = power[b];
            m.peak_mode = static_cast<int>(b);
        }
    }
    if (m.peak_mode > 0) m.dominant_wavelength = f.grid.lx / m.peak_mode;
    return m;
}

}  // namespace nlkm
