// Forward Euler integration of the coupled biomass-water system, in local
// (Laplacian dispersal) or nonlocal (kernel dispersal) mode, with explicit
// stability limits and runtime checks of the analytical invariants:
// componentwise nonnegativity and the water sup-norm bound max(|w0|_inf, a).
#pragma once

#include "nlkm/errors.hpp"
#include "nlkm/grid.hpp"
#include "nlkm/kernel.hpp"
#include "nlkm/localop.hpp"
#include "nlkm/reaction.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

namespace nlkm {

struct SimState {
    double t = 0.0;
    std::int64_t step_index = 0;
    Field n;
    Field w;
};

struct StepControl {
    std::optional<double> dt;         // resolved against the stability limit when unset
    double t_end = 200.0;
    double safety = 0.9;              // fraction of the stability limit used for auto dt
    std::int64_t snapshot_stride = 1000;
};

/// Per-term explicit step limits; infinity marks an absent mechanism.
struct StabilityLimits {
    double diffusion = std::numeric_limits<double>::infinity();
    double advection = std::numeric_limits<double>::infinity();
    double nonlocal = std::numeric_limits<double>::infinity();
    double kinetics = std::numeric_limits<double>::infinity();

    double overall() const {
        return std::min(std::min(diffusion, advection), std::min(nonlocal, kinetics));
    }
};

/// Stiffest kinetic rate estimate used for the reaction step limit, evaluated
/// on the initial data: max(alpha, 1 + |n|_inf^2, 2 |w|_inf |n|_inf).
inline double kinetic_rate_bound(const ModelParams& p, double n_inf, double w_inf) {
    return std::max(p.alpha, std::max(1.0 + n_inf * n_inf, 2.0 * w_inf * n_inf));
}

/// Limits: h^2/(4 d) for diffusion (d = d2, plus d1 in local mode where the
/// biomass diffuses), h/v for advection, 1/(2 d1 lambda_disc) for the nonlocal
/// operator, and 1/(2 r_max) for the kinetics.
inline StabilityLimits stability_limits(const ModelParams& p, const GridSpec& g,
                                        const DiscreteKernel* k, double n_inf, double w_inf) {
    if ((p.mode == ModelMode::nonlocal) != (k != nullptr))
        throw std::invalid_argument("stability_limits: kernel must be present exactly in nonlocal mode");
    StabilityLimits lim;
    const double d_diff = (p.mode == ModelMode::local) ? std::max(p.d1, p.d2) : p.d2;
    if (d_diff > 0.0) {
        const double h = std::min(g.hx, g.hy);
        lim.diffusion = h * h / (4.0 * d_diff);
    }
    if (p.v > 0.0) lim.advection = g.hx / p.v;
    if (k) lim.nonlocal = 1.0 / (2.0 * p.d1 * k->lambda_disc());
    lim.kinetics = 1.0 / (2.0 * kinetic_rate_bound(p, n_inf, w_inf));
    return lim;
}

inline double stability_limit(const ModelParams& p, const GridSpec& g, const DiscreteKernel* k,
                              double n_inf, double w_inf) {
    return stability_limits(p, g, k, n_inf, w_inf).overall();
}

struct DiagRecord {
    std::int64_t step_index = 0;
    double t = 0.0;
    double n_inf = 0.0, w_inf = 0.0;
    double n_min = 0.0, w_min = 0.0;
    double n_max = 0.0, w_max = 0.0;
    double mass = 0.0;  // integral of n + w
    std::int64_t clamped_cells = 0;  // running total of roundoff clamps
};

inline DiagRecord make_diag(const SimState& s, std::int64_t clamped) {
    DiagRecord d;
    d.step_index = s.step_index;
    d.t = s.t;
    d.n_inf = linf_norm(s.n);
    d.w_inf = linf_norm(s.w);
    d.n_min = min_value(s.n);
    d.w_min = min_value(s.w);
    d.n_max = max_value(s.n);
    d.w_max = max_value(s.w);
    d.mass = integral(s.n) + integral(s.w);
    d.clamped_cells = clamped;
    return d;
}

struct Snapshot {
    const SimState& state;
    const DiagRecord& diag;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

struct RunResult {
    SimState final_state;
    std::vector<DiagRecord> trace;
    double dt_used = 0.0;
    std::int64_t steps_taken = 0;
    std::int64_t clamped_cells = 0;
};

enum class ConvPath { direct, fft };

class Stepper {
public:
    /// Negative excursions no deeper than this are roundoff and get clamped
    /// to zero; anything deeper aborts the run.
    static constexpr double kNegativityTol = 1e-12;
    /// Slack on the water sup-norm bound before a step is rejected.
    static constexpr double kSupBoundTol = 1e-9;

    /// The kernel must be supplied exactly in nonlocal mode and outlive the
    /// stepper. w_sup_bound is max(|w0|_inf, a) for the run being integrated.
    Stepper(const ModelParams& p, const GridSpec& g, const DiscreteKernel* kernel,
            ConvPath path, double w_sup_bound)
        : p_(p), g_(g), kernel_(kernel), path_(path), w_bound_(w_sup_bound) {
        validate(p_);
        if ((p_.mode == ModelMode::nonlocal) != (kernel_ != nullptr))
            throw std::invalid_argument("Stepper: kernel must be present exactly in nonlocal mode");
        if (kernel_ && !(kernel_->grid() == g_))
            throw std::invalid_argument("Stepper: kernel grid mismatch");
        if (kernel_ && path_ == ConvPath::fft)
            conv_ = std::make_unique<FftConvolver>(g_, kernel_->half_width_x(),
                                                   kernel_->half_width_y(), kernel_->stencil());
    }

    double w_sup_bound() const { return w_bound_; }
    std::int64_t clamped_cells() const { return clamped_; }

    void step_inplace(SimState& s, double dt) {
        if (!(dt > 0.0)) throw std::invalid_argument("Stepper::step: dt must be positive");
        const Field dispersal = biomass_dispersal(s.n);
        const bool diffuse_w = p_.d2 > 0.0;
        const bool advect_w = p_.v > 0.0;
        const Field lap_w = diffuse_w ? laplacian_neumann(s.w) : Field();
        const Field adv_w = advect_w ? advection_x(s.w, p_.v) : Field();

        Field n_next(g_), w_next(g_);
        const std::int64_t cells = g_.cell_count();
        for (std::int64_t idx = 0; idx < cells; ++idx) {
            const double n = s.n.values[idx];
            const double w = s.w.values[idx];
            n_next.values[idx] = n + dt * (p_.d1 * dispersal.values[idx] + f_kinetics(n, w, p_));
            double dw = g_kinetics(n, w, p_);
            if (diffuse_w) dw += p_.d2 * lap_w.values[idx];
            if (advect_w) dw += adv_w.values[idx];
            w_next.values[idx] = w + dt * dw;
        }

        s.step_index += 1;
        s.t += dt;
        enforce_invariants(n_next, "n", s.step_index);
        enforce_invariants(w_next, "w", s.step_index);
        check_sup_bound(w_next, s.step_index);
        s.n = std::move(n_next);
        s.w = std::move(w_next);
    }

    /// Integrates to ctl.t_end, emitting a snapshot at step 0, every
    /// snapshot_stride accepted steps, and at the final step.
    RunResult run(SimState state, const StepControl& ctl, const SnapshotSink& sink = {}) {
        if (!ctl.dt || !(*ctl.dt > 0.0))
            throw std::invalid_argument("Stepper::run: StepControl.dt must be resolved and positive");
        if (ctl.snapshot_stride < 1)
            throw std::invalid_argument("Stepper::run: snapshot_stride must be at least 1");
        const double dt = *ctl.dt;
        RunResult result;
        result.dt_used = dt;

        auto emit = [&](const SimState& s) {
            const DiagRecord d = make_diag(s, clamped_);
            result.trace.push_back(d);
            if (sink) sink(Snapshot{s, d});
        };

        emit(state);
        const double t_eps = 1e-12 * std::max(1.0, std::abs(ctl.t_end));
        std::int64_t since_snapshot = 0;
        while (state.t < ctl.t_end - t_eps) {
            const double dt_i = std::min(dt, ctl.t_end - state.t);
            step_inplace(state, dt_i);
            result.steps_taken += 1;
            since_snapshot += 1;
            const bool last = !(state.t < ctl.t_end - t_eps);
            if (since_snapshot >= ctl.snapshot_stride || last) {
                emit(state);
                since_snapshot = 0;
            }
        }
        result.clamped_cells = clamped_;
        result.final_state = std::move(state);
        return result;
    }

private:
    Field biomass_dispersal(const Field& n) const {
        if (p_.mode == ModelMode::local) return laplacian_neumann(n);
        if (conv_) return apply_nonlocal_fft(*conv_, *kernel_, n);
        return apply_nonlocal_direct(*kernel_, n);
    }

    void enforce_invariants(Field& f, const char* name, std::int64_t step) {
        for (double& v : f.values) {
            if (!std::isfinite(v))
                throw NumericalError(std::string("non-finite value in ") + name, step);
            if (v < 0.0) {
                if (v < -kNegativityTol)
                    throw NumericalError(std::string("nonnegativity violated: min ") + name + " = " +
                                             std::to_string(v) + "; dt too large or scheme defect",
                                         step);
                v = 0.0;
                clamped_ += 1;
            }
        }
    }

    void check_sup_bound(const Field& w, std::int64_t step) const {
        const double m = linf_norm(w);
        if (m > w_bound_ + kSupBoundTol)
            throw NumericalError("water sup bound violated: |w|_inf = " + std::to_string(m) +
                                     " exceeds " + std::to_string(w_bound_),
                                 step);
    }

    ModelParams p_;
    GridSpec g_;
    const DiscreteKernel* kernel_;
    ConvPath path_;
    double w_bound_;
    std::unique_ptr<FftConvolver> conv_;
    std::int64_t clamped_ = 0;
};

/// Single-step convenience mirroring the stepper with the bound taken from
/// the incoming state itself.
inline SimState step(const SimState& s, const ModelParams& p, const GridSpec& g,
                     const DiscreteKernel* k, double dt) {
    Stepper st(p, g, k, ConvPath::direct, std::max(linf_norm(s.w), p.a));
    SimState out = s;
    st.step_inplace(out, dt);
    return out;
}

}  // namespace nlkm
