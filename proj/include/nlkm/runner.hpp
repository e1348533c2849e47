// Orchestration: initial-state construction, full simulation runs with
// snapshot persistence and manifest, the analyze / kernel-info / compare
// workflows. Shared by the CLI and the acceptance suite.
#pragma once

#include "nlkm/analysis.hpp"
#include "nlkm/config.hpp"
#include "nlkm/manifest.hpp"
#include "nlkm/rng.hpp"
#include "nlkm/snapshot_io.hpp"
#include "nlkm/spectrum.hpp"
#include "nlkm/stepper.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>

namespace nlkm {

struct SimulationSetup {
    RunConfig cfg;
    GridSpec grid;
    ModelParams params;
    std::optional<DiscreteKernel> kernel;
    SimState state0;
    StabilityLimits limits;
    double dt = 0.0;
    double w_sup_bound = 0.0;
};

inline SimState initial_state(const RunConfig& cfg, const GridSpec& grid, const ModelParams& params) {
    SimState s;
    switch (cfg.init) {
        case InitKind::reference_profiles: {
            auto [n0, w0] = eval_initial_conditions(grid);
            s.n = std::move(n0);
            s.w = std::move(w0);
            break;
        }
        case InitKind::uniform_plus_noise: {
            const EquilibriumSet eq = equilibria(params);
            const auto base = eq.vegetated.empty() ? eq.bare_soil : eq.vegetated.back();
            s.n = Field(grid);
            s.w = Field(grid, base[1]);
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i)
                    s.n.at(i, j) = std::max(
                        0.0, base[0] + cfg.noise_amplitude * cell_noise(cfg.noise_seed, i, j));
            break;
        }
        case InitKind::from_file: {
            s.n = to_field(read_field_raw(cfg.init_n_file), grid);
            s.w = to_field(read_field_raw(cfg.init_w_file), grid);
            if (min_value(s.n) < 0.0 || min_value(s.w) < 0.0)
                throw ConfigError("initial data loaded from file must be nonnegative");
            break;
        }
    }
    return s;
}

/// Builds grid, kernel, initial state and resolves dt against the stability
/// limit. An explicit dt override must respect safety * limit.
inline SimulationSetup prepare_simulation(const RunConfig& cfg) {
    SimulationSetup setup;
    setup.cfg = cfg;
    setup.grid = cfg.grid();
    setup.params = cfg.params();
    validate(setup.params);
    if (setup.params.mode == ModelMode::nonlocal)
        setup.kernel.emplace(build_kernel(setup.grid, cfg.kernel_spec()));
    setup.state0 = initial_state(cfg, setup.grid, setup.params);
    setup.limits = stability_limits(setup.params, setup.grid,
                                    setup.kernel ? &*setup.kernel : nullptr,
                                    linf_norm(setup.state0.n), linf_norm(setup.state0.w));
    const double dt_max = cfg.safety * setup.limits.overall();
    if (cfg.dt) {
        if (*cfg.dt > dt_max)
            throw ConfigError("dt = " + detail::fmt_double(*cfg.dt) +
                              " exceeds safety * stability limit = " + detail::fmt_double(dt_max));
        setup.dt = *cfg.dt;
    } else {
        setup.dt = dt_max;
    }
    setup.w_sup_bound = std::max(linf_norm(setup.state0.w), setup.params.a);
    return setup;
}

struct SimulationOutcome {
    RunResult result;
    RunManifest manifest;
    std::filesystem::path out_dir;
};

/// Full run: integrate, persist snapshots in the configured formats, write
/// manifest.json. Snapshots land in out_dir (override wins over the config).
///
/// The auto time step is resolved from the stability limit on the initial
/// data. Kinetic rates can stiffen later (the reference initial data drive a
/// large biomass transient), and the step diagnostics then reject the run; in
/// that case the driver restarts from t = 0 with dt halved. Each attempt is a
/// plain fixed-step run, and an explicitly configured dt is never altered.
inline SimulationOutcome run_simulation(const RunConfig& cfg,
                                        const std::optional<std::string>& out_override = {}) {
    const SimulationSetup setup = prepare_simulation(cfg);
    const std::filesystem::path out_dir = out_override.value_or(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    RunManifest manifest;
    manifest.config_text = render_config(cfg);
    manifest.hx = setup.grid.hx;
    manifest.hy = setup.grid.hy;
    manifest.lambda_disc = setup.kernel ? setup.kernel->lambda_disc() : 0.0;
    manifest.limits = setup.limits;
    manifest.w_sup_bound = setup.w_sup_bound;
    manifest.started_utc = detail::utc_now_string();
    const auto t0 = std::chrono::steady_clock::now();

    const SnapshotFormats fmts{cfg.fmt_csv, cfg.fmt_pgm, cfg.fmt_raw};
    const DiscreteKernel* kernel = setup.kernel ? &*setup.kernel : nullptr;

    SimulationOutcome outcome;
    outcome.out_dir = out_dir;
    double dt = setup.dt;
    constexpr int kMaxAttempts = 12;
    for (int attempt = 1;; ++attempt) {
        manifest.snapshots.clear();
        manifest.dt_used = dt;
        manifest.dt_attempts = attempt;
        Stepper stepper(setup.params, setup.grid, kernel, cfg.conv, setup.w_sup_bound);
        StepControl ctl = cfg.control();
        ctl.dt = dt;
        try {
            outcome.result = stepper.run(setup.state0, ctl, [&](const Snapshot& snap) {
                ManifestSnapshotRow row;
                row.diag = snap.diag;
                row.files = write_snapshot(out_dir, snap.state, fmts);
                manifest.snapshots.push_back(std::move(row));
            });
            break;
        } catch (const NumericalError&) {
            if (cfg.dt || attempt >= kMaxAttempts) throw;
            dt *= 0.5;
        }
    }

    manifest.steps_taken = outcome.result.steps_taken;
    manifest.clamped_cells = outcome.result.clamped_cells;
    manifest.finished_utc = detail::utc_now_string();
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out_dir, manifest);
    outcome.manifest = std::move(manifest);
    return outcome;
}

// --- analyze ---

struct AnalysisReport {
    ModelParams params;
    EquilibriumSet eq;
    std::vector<TuringReport> reports;  // bare soil first, then vegetated by n ascending
};

inline AnalysisReport analyze_model(const ModelParams& p) {
    validate(p);
    AnalysisReport rep;
    rep.params = p;
    rep.eq = equilibria(p);
    rep.reports.push_back(turing_report(p, rep.eq.bare_soil[0], rep.eq.bare_soil[1]));
    for (const auto& e : rep.eq.vegetated) rep.reports.push_back(turing_report(p, e[0], e[1]));
    return rep;
}

inline nlohmann::json to_json(const TuringReport& r) {
    return {
        {"equilibrium", {r.equilibrium[0], r.equilibrium[1]}},
        {"jacobian", {{"fn", r.jacobian.fn}, {"fw", r.jacobian.fw}, {"gn", r.jacobian.gn}, {"gw", r.jacobian.gw}}},
        {"trace", r.trace},
        {"det", r.det},
        {"printed_conditions", r.printed_conditions},
        {"standard_conditions", r.standard_conditions},
        {"verdict", to_string(r.verdict)},
    };
}

inline nlohmann::json to_json(const AnalysisReport& rep) {
    nlohmann::json j;
    j["params"] = {{"d1", rep.params.d1}, {"d2", rep.params.d2}, {"v", rep.params.v},
                   {"a", rep.params.a},   {"alpha", rep.params.alpha},
                   {"mode", to_string(rep.params.mode)}};
    j["discriminant"] = rep.eq.discriminant;
    j["bare_soil"] = {rep.eq.bare_soil[0], rep.eq.bare_soil[1]};
    j["vegetated"] = nlohmann::json::array();
    for (const auto& e : rep.eq.vegetated) j["vegetated"].push_back({e[0], e[1]});
    j["turing_reports"] = nlohmann::json::array();
    for (const auto& r : rep.reports) j["turing_reports"].push_back(to_json(r));
    return j;
}

inline void print_analysis(std::ostream& os, const AnalysisReport& rep) {
    const auto flag = [](bool b) { return b ? "yes" : "no "; };
    os << "equilibria (a = " << rep.params.a << ", alpha = " << rep.params.alpha
       << ", discriminant a^2 - 4 alpha^2 = " << rep.eq.discriminant << ")\n";
    os << "  bare soil:  n = " << rep.eq.bare_soil[0] << ", w = " << rep.eq.bare_soil[1] << "\n";
    if (rep.eq.vegetated.empty()) {
        os << "  vegetated:  none (a < 2 alpha)\n";
    } else {
        for (const auto& e : rep.eq.vegetated)
            os << "  vegetated:  n = " << std::setprecision(15) << e[0] << ", w = " << e[1] << "\n";
    }
    os << "\n";
    for (const auto& r : rep.reports) {
        os << "stability at (n, w) = (" << std::setprecision(15) << r.equilibrium[0] << ", "
           << r.equilibrium[1] << ")\n";
        os << "  jacobian [[f_n, f_w], [g_n, g_w]] = [[" << r.jacobian.fn << ", " << r.jacobian.fw
           << "], [" << r.jacobian.gn << ", " << r.jacobian.gw << "]]\n";
        os << "  trace = " << r.trace << ", det = " << r.det << "\n";
        os << "  cross-partial condition set (uses f_w, g_n):\n";
        os << "    f_w + g_n < 0:                      " << flag(r.printed_conditions[0]) << "\n";
        os << "    f_w g_n - f_n g_w > 0:              " << flag(r.printed_conditions[1]) << "\n";
        os << "    d2 f_w + d1 g_n > 0:                " << flag(r.printed_conditions[2]) << "\n";
        os << "    (d2 f_w + d1 g_n)^2 > 4 d1 d2 (..): " << flag(r.printed_conditions[3]) << "\n";
        os << "  standard trace/determinant condition set:\n";
        os << "    tr J < 0:                           " << flag(r.standard_conditions[0]) << "\n";
        os << "    det J > 0:                          " << flag(r.standard_conditions[1]) << "\n";
        os << "    d2 f_n + d1 g_w > 0:                " << flag(r.standard_conditions[2]) << "\n";
        os << "    (d2 f_n + d1 g_w)^2 > 4 d1 d2 det:  " << flag(r.standard_conditions[3]) << "\n";
        os << "  verdict: " << to_string(r.verdict) << "\n\n";
    }
}

// --- kernel-info ---

struct KernelInfoReport {
    double sigma = 0.0, cutoff_radii = 0.0;
    int half_width_x = 0, half_width_y = 0;
    double lambda_disc = 0.0;
    double mass_min = 0.0, mass_mean = 0.0, mass_max = 0.0;
};

inline KernelInfoReport kernel_info(const RunConfig& cfg) {
    if (cfg.mode != ModelMode::nonlocal)
        throw ConfigError("kernel-info requires mode = nonlocal");
    const GridSpec grid = cfg.grid();
    const DiscreteKernel k = build_kernel(grid, cfg.kernel_spec());
    KernelInfoReport info;
    info.sigma = cfg.sigma;
    info.cutoff_radii = cfg.cutoff_radii;
    info.half_width_x = k.half_width_x();
    info.half_width_y = k.half_width_y();
    info.lambda_disc = k.lambda_disc();
    const Field& m = k.boundary_mass();
    info.mass_min = min_value(m);
    info.mass_max = max_value(m);
    double sum = 0.0;
    for (double v : m.values) sum += v;
    info.mass_mean = sum / static_cast<double>(m.values.size());
    return info;
}

inline void print_kernel_info(std::ostream& os, const KernelInfoReport& info) {
    os << "kernel: gaussian sigma = " << info.sigma << ", cutoff = " << info.cutoff_radii
       << " sigma\n";
    os << "stencil: " << (2 * info.half_width_x + 1) << " x " << (2 * info.half_width_y + 1)
       << " (half-widths " << info.half_width_x << ", " << info.half_width_y << ")\n";
    os << std::setprecision(15);
    os << "lambda_disc (max clipped mass): " << info.lambda_disc << "\n";
    os << "boundary mass: min = " << info.mass_min << ", mean = " << info.mass_mean
       << ", max = " << info.mass_max << "\n";
}

// --- compare ---

struct CompareOutcome {
    double l2_distance_n = 0.0;
    double linf_distance_n = 0.0;
    PatternMetrics metrics_local, metrics_nonlocal;
    SimulationOutcome local_run, nonlocal_run;
};

/// Runs the local and nonlocal configurations from identical initial data and
/// summarizes the final-time difference in the biomass field.
inline CompareOutcome run_compare(const RunConfig& cfg_local, const RunConfig& cfg_nonlocal,
                                  const std::string& out_dir) {
    if (cfg_local.mode != ModelMode::local)
        throw ConfigError("compare: first config must have mode = local");
    if (cfg_nonlocal.mode != ModelMode::nonlocal)
        throw ConfigError("compare: second config must have mode = nonlocal");
    if (!(cfg_local.grid() == cfg_nonlocal.grid()))
        throw ConfigError("compare: the two configs must share the same grid");
    if (cfg_local.init != cfg_nonlocal.init ||
        cfg_local.noise_amplitude != cfg_nonlocal.noise_amplitude ||
        cfg_local.noise_seed != cfg_nonlocal.noise_seed ||
        cfg_local.init_n_file != cfg_nonlocal.init_n_file ||
        cfg_local.init_w_file != cfg_nonlocal.init_w_file)
        throw ConfigError("compare: the two configs must use identical initial data");

    CompareOutcome out;
    out.local_run = run_simulation(cfg_local, out_dir + "/local");
    out.nonlocal_run = run_simulation(cfg_nonlocal, out_dir + "/nonlocal");

    const Field& n_local = out.local_run.result.final_state.n;
    const Field& n_nonlocal = out.nonlocal_run.result.final_state.n;
    double ss = 0.0, mmax = 0.0;
    for (std::size_t k = 0; k < n_local.values.size(); ++k) {
        const double d = n_local.values[k] - n_nonlocal.values[k];
        ss += d * d;
        mmax = std::max(mmax, std::abs(d));
    }
    out.l2_distance_n = std::sqrt(ss * n_local.grid.hx * n_local.grid.hy);
    out.linf_distance_n = mmax;
    out.metrics_local = pattern_metrics(n_local);
    out.metrics_nonlocal = pattern_metrics(n_nonlocal);

    nlohmann::json j;
    j["l2_distance_n"] = out.l2_distance_n;
    j["linf_distance_n"] = out.linf_distance_n;
    auto metrics_json = [](const PatternMetrics& m) {
        return nlohmann::json{{"mean", m.mean},
                              {"stddev", m.stddev},
                              {"cv", m.cv},
                              {"peak_mode", m.peak_mode},
                              {"dominant_wavelength", m.dominant_wavelength}};
    };
    j["local"] = metrics_json(out.metrics_local);
    j["nonlocal"] = metrics_json(out.metrics_nonlocal);
    const std::filesystem::path path = std::filesystem::path(out_dir) / "compare.json";
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << j.dump(2) << "\n";
    return out;
}

}  // namespace nlkm
