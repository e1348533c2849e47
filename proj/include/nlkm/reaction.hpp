// Klausmeier kinetics f(n,w) = w n^2 - alpha n, g(n,w) = a - w - w n^2,
// their Jacobian, and the model parameter record.
#pragma once

#include <stdexcept>
#include <string>

namespace nlkm {

enum class ModelMode { local, nonlocal };

inline const char* to_string(ModelMode m) { return m == ModelMode::local ? "local" : "nonlocal"; }

struct ModelParams {
    double d1 = 0.05;     // biomass dispersal coefficient
    double d2 = 0.003;    // water diffusion coefficient (0 allowed in local mode)
    double v = 5.0;       // downhill water speed
    double a = 0.15;      // rainfall rate
    double alpha = 0.045; // biomass mortality
    ModelMode mode = ModelMode::nonlocal;
};

/// Throws on parameter combinations the model does not admit. Water diffusion
/// may be zero only in local mode; equal nonzero diffusivities are rejected.
inline void validate(const ModelParams& p) {
    if (!(p.d1 > 0.0)) throw std::invalid_argument("ModelParams: d1 must be positive");
    if (p.mode == ModelMode::nonlocal && !(p.d2 > 0.0))
        throw std::invalid_argument("ModelParams: d2 must be positive in nonlocal mode");
    if (p.d2 < 0.0) throw std::invalid_argument("ModelParams: d2 must be nonnegative");
    if (p.d2 > 0.0 && p.d1 == p.d2)
        throw std::invalid_argument("ModelParams: d1 and d2 must differ (equal diffusivities are not supported)");
    if (p.v < 0.0) throw std::invalid_argument("ModelParams: v must be nonnegative");
    if (!(p.a > 0.0)) throw std::invalid_argument("ModelParams: a must be positive");
    if (!(p.alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be positive");
}

inline double f_kinetics(double n, double w, const ModelParams& p) {
    return w * n * n - p.alpha * n;
}

inline double g_kinetics(double n, double w, const ModelParams& p) {
    return p.a - w - w * n * n;
}

/// [[f_n, f_w], [g_n, g_w]] of the kinetics at a state (n, w).
struct Jacobian2 {
    double fn = 0.0, fw = 0.0, gn = 0.0, gw = 0.0;

    double trace() const { return fn + gw; }
    double det() const { return fn * gw - fw * gn; }
};

inline Jacobian2 kinetics_jacobian(double n, double w, const ModelParams& p) {
    Jacobian2 j;
    j.fn = 2.0 * w * n - p.alpha;
    j.fw = n * n;
    j.gn = -2.0 * w * n;
    j.gw = -1.0 - n * n;
    return j;
}

}  // namespace nlkm
