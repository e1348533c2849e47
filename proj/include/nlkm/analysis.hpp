// Kinetic equilibria in closed form, Turing-condition evaluation (two
// inequivalent condition sets circulate for this system: one written with the
// cross partials f_w, g_n, and the conventional trace/determinant form; both
// are computed under distinct labels), and executable oracles for the kernel
// integral identities and the comparison principle.
#pragma once

#include "nlkm/grid.hpp"
#include "nlkm/kernel.hpp"
#include "nlkm/reaction.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nlkm {

struct EquilibriumSet {
    std::array<double, 2> bare_soil{0.0, 0.0};          // always (0, a)
    std::vector<std::array<double, 2>> vegetated;       // ordered by n ascending
    double discriminant = 0.0;                          // a^2 - 4 alpha^2
};

/// Closed-form equilibria of the kinetics. Vegetated states exist iff
/// a >= 2 alpha:
///   n = 2 alpha / (a +- sqrt(a^2 - 4 alpha^2)),  w = (a +- sqrt(...)) / 2.
/// The minus-branch values are evaluated through the rationalized forms
/// (a + s)/(2 alpha) and 2 alpha^2/(a + s) to avoid cancellation.
inline EquilibriumSet equilibria(const ModelParams& p) {
    if (!(p.a > 0.0) || !(p.alpha > 0.0))
        throw std::invalid_argument("equilibria: a and alpha must be positive");
    EquilibriumSet e;
    e.bare_soil = {0.0, p.a};
    e.discriminant = p.a * p.a - 4.0 * p.alpha * p.alpha;
    if (e.discriminant < 0.0) return e;
    const double s = std::sqrt(e.discriminant);
    const double n_lo = 2.0 * p.alpha / (p.a + s);
    const double w_lo = (p.a + s) / 2.0;
    e.vegetated.push_back({n_lo, w_lo});
    if (s > 0.0) {
        const double n_hi = (p.a + s) / (2.0 * p.alpha);
        const double w_hi = 2.0 * p.alpha * p.alpha / (p.a + s);
        e.vegetated.push_back({n_hi, w_hi});
    }
    return e;
}

enum class TuringVerdict {
    stable_no_pattern,
    turing_unstable_printed,
    turing_unstable_standard,
    hopf_or_unstable,
};

inline const char* to_string(TuringVerdict v) {
    switch (v) {
        case TuringVerdict::stable_no_pattern: return "stable_no_pattern";
        case TuringVerdict::turing_unstable_printed: return "turing_unstable_printed";
        case TuringVerdict::turing_unstable_standard: return "turing_unstable_standard";
        case TuringVerdict::hopf_or_unstable: return "hopf_or_unstable";
    }
    return "?";
}

struct TuringReport {
    std::array<double, 2> equilibrium{0.0, 0.0};
    Jacobian2 jacobian;
    double trace = 0.0, det = 0.0;
    // Cross-partial set: f_w + g_n < 0 ; f_w g_n - f_n g_w > 0 ;
    //   d2 f_w + d1 g_n > 0 ; (d2 f_w + d1 g_n)^2 > 4 d1 d2 (f_w g_n - f_n g_w).
    std::array<bool, 4> printed_conditions{};
    // Conventional: tr J < 0 ; det J > 0 ; d2 f_n + d1 g_w > 0 ;
    //               (d2 f_n + d1 g_w)^2 > 4 d1 d2 det J.
    std::array<bool, 4> standard_conditions{};
    TuringVerdict verdict = TuringVerdict::stable_no_pattern;
};

/// Evaluates both condition sets at a kinetic equilibrium. The two sets use
/// permuted Jacobian subscripts and genuinely disagree for this model; both
/// are reported under distinct labels and neither is silently preferred.
inline TuringReport turing_report(const ModelParams& p, double n, double w) {
    const double resid = std::abs(f_kinetics(n, w, p)) + std::abs(g_kinetics(n, w, p));
    if (!(resid <= 1e-10))
        throw std::invalid_argument("turing_report: (n, w) is not a kinetic equilibrium");
    TuringReport r;
    r.equilibrium = {n, w};
    r.jacobian = kinetics_jacobian(n, w, p);
    const Jacobian2& j = r.jacobian;
    r.trace = j.trace();
    r.det = j.det();

    const double printed_cross = j.fw * j.gn - j.fn * j.gw;
    const double printed_diff = p.d2 * j.fw + p.d1 * j.gn;
    r.printed_conditions = {j.fw + j.gn < 0.0, printed_cross > 0.0, printed_diff > 0.0,
                            printed_diff * printed_diff > 4.0 * p.d1 * p.d2 * printed_cross};

    const double standard_diff = p.d2 * j.fn + p.d1 * j.gw;
    r.standard_conditions = {r.trace < 0.0, r.det > 0.0, standard_diff > 0.0,
                             standard_diff * standard_diff > 4.0 * p.d1 * p.d2 * r.det};

    const bool kinetically_stable = r.trace < 0.0 && r.det > 0.0;
    const bool all_standard = r.standard_conditions[0] && r.standard_conditions[1] &&
                              r.standard_conditions[2] && r.standard_conditions[3];
    const bool all_printed = r.printed_conditions[0] && r.printed_conditions[1] &&
                             r.printed_conditions[2] && r.printed_conditions[3];
    if (!kinetically_stable)
        r.verdict = TuringVerdict::hopf_or_unstable;
    else if (all_standard)
        r.verdict = TuringVerdict::turing_unstable_standard;
    else if (all_printed)
        r.verdict = TuringVerdict::turing_unstable_printed;
    else
        r.verdict = TuringVerdict::stable_no_pattern;
    return r;
}

/// Discrete residuals of the two kernel integral identities, both sides as
/// explicit double sums over cell pairs inside the stencil.
///
/// r1 = | II v(x) phi (w(y)-w(x)) + 1/2 II (v(y)-v(x)) phi (w(y)-w(x)) |
/// r2 =   II v_-(x) phi (v(y)-v(x)),  with v_- = max(-v, 0); r2 >= 0 up to roundoff.
inline std::pair<double, double> lemma21_identity_residuals(const DiscreteKernel& k,
                                                            const Field& v, const Field& w) {
    if (!(v.grid == k.grid()) || !(w.grid == k.grid()))
        throw std::invalid_argument("lemma21_identity_residuals: field grid mismatch");
    const GridSpec& g = k.grid();
    const int nx = g.nx, ny = g.ny, kx = k.half_width_x(), ky = k.half_width_y();
    const int wx = 2 * kx + 1;
    const double* st = k.stencil().data();

    double lhs = 0.0, rhs_half = 0.0, quad = 0.0;
    for (int j = 0; j < ny; ++j) {
        const int dy_lo = std::max(-ky, -j), dy_hi = std::min(ky, ny - 1 - j);
        for (int i = 0; i < nx; ++i) {
            const int dx_lo = std::max(-kx, -i), dx_hi = std::min(kx, nx - 1 - i);
            const double vc = v.at(i, j);
            const double wc = w.at(i, j);
            const double vneg = vc <= 0.0 ? -vc : 0.0;
            for (int dy = dy_lo; dy <= dy_hi; ++dy) {
                const double* wrow = st + static_cast<std::size_t>(dy + ky) * wx + kx;
                for (int dx = dx_lo; dx <= dx_hi; ++dx) {
                    const double phi = wrow[dx];
                    const double dv = v.at(i + dx, j + dy) - vc;
                    const double dw = w.at(i + dx, j + dy) - wc;
                    lhs += vc * phi * dw;
                    rhs_half += dv * phi * dw;
                    quad += vneg * phi * dv;
                }
            }
        }
    }
    const double cell = g.hx * g.hy;  // outer quadrature measure
    const double r1 = std::abs(lhs + 0.5 * rhs_half) * cell;
    const double r2 = quad * cell;
    return {r1, r2};
}

struct ComparisonResult {
    bool holds = true;
    std::int64_t violating_step = -1;
    std::int64_t violating_cell = -1;
    double worst_excess = 0.0;  // max over the run of (zeta - xi), violations only

    explicit operator bool() const { return holds; }
};

/// Integrates the exact problem xi_t = Gamma(xi) + F(xi) and the subsolution
/// zeta_t = Gamma(zeta) + F(zeta) - forcing_gap from the same initial data
/// with the same forward Euler scheme, and checks zeta <= xi + 1e-10
/// pointwise at every accepted step.
inline ComparisonResult comparison_oracle(const DiscreteKernel& k,
                                          const std::function<double(double)>& F,
                                          const Field& zeta0, const Field& forcing_gap,
                                          double dt, double t_end) {
    if (!(zeta0.grid == k.grid()) || !(forcing_gap.grid == k.grid()))
        throw std::invalid_argument("comparison_oracle: field grid mismatch");
    if (min_value(forcing_gap) < 0.0)
        throw std::invalid_argument("comparison_oracle: forcing_gap must be nonnegative");
    if (!(dt > 0.0)) throw std::invalid_argument("comparison_oracle: dt must be positive");
    constexpr double tol = 1e-10;

    ComparisonResult res;
    Field zeta = zeta0, xi = zeta0;
    double t = 0.0;
    std::int64_t step = 0;
    const std::int64_t cells = k.grid().cell_count();
    while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
        const double dt_i = std::min(dt, t_end - t);
        const Field gamma_zeta = apply_nonlocal_direct(k, zeta);
        const Field gamma_xi = apply_nonlocal_direct(k, xi);
        for (std::int64_t c = 0; c < cells; ++c) {
            zeta.values[c] += dt_i * (gamma_zeta.values[c] + F(zeta.values[c]) - forcing_gap.values[c]);
            xi.values[c] += dt_i * (gamma_xi.values[c] + F(xi.values[c]));
        }
        t += dt_i;
        step += 1;
        for (std::int64_t c = 0; c < cells; ++c) {
            const double excess = zeta.values[c] - xi.values[c];
            if (excess > tol) {
                if (res.holds) {
                    res.holds = false;
                    res.violating_step = step;
                    res.violating_cell = c;
                }
                res.worst_excess = std::max(res.worst_excess, excess);
            }
        }
    }
    return res;
}

}  // namespace nlkm
