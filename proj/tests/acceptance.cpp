// End-to-end acceptance suite. Each numbered scenario is verified at its
// stated tolerance and reported as one pass/fail line; the process exit code
// is the number of failed scenarios. Time budgets are printed for reference
// (a slow host does not flip a numerically correct result).

#include "nlkm/analysis.hpp"
#include "nlkm/runner.hpp"
#include "nlkm/spectrum.hpp"

#include <chrono>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nlkm;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

Field random_field(const GridSpec& g, std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Field f(g);
    for (double& v : f.values) v = u(rng);
    return f;
}

struct TrialRun {
    SimState final_state;
    std::vector<DiagRecord> trace;
    double dt = 0.0;
    int attempts = 1;
    double w_sup_bound = 0.0;
    double w0_inf = 0.0;
    double mass0 = 0.0;
};

// Mirror of the simulation driver's auto-dt policy, without disk I/O:
// fixed-step forward Euler, restarted from t = 0 with dt halved whenever the
// runtime diagnostics reject a step.
TrialRun integrate(const RunConfig& cfg, std::int64_t stride) {
    const SimulationSetup setup = prepare_simulation(cfg);
    const DiscreteKernel* kernel = setup.kernel ? &*setup.kernel : nullptr;
    TrialRun out;
    out.w_sup_bound = setup.w_sup_bound;
    out.w0_inf = linf_norm(setup.state0.w);
    out.mass0 = integral(setup.state0.n) + integral(setup.state0.w);
    double dt = setup.dt;
    for (int attempt = 1;; ++attempt) {
        Stepper stepper(setup.params, setup.grid, kernel, cfg.conv, setup.w_sup_bound);
        StepControl ctl = cfg.control();
        ctl.dt = dt;
        ctl.snapshot_stride = stride;
        try {
            RunResult res = stepper.run(setup.state0, ctl);
            out.final_state = std::move(res.final_state);
            out.trace = std::move(res.trace);
            out.dt = dt;
            out.attempts = attempt;
            return out;
        } catch (const NumericalError&) {
            if (attempt >= 12) throw;
            dt *= 0.5;
        }
    }
}

// Largest growth rate over all grid Fourier modes of the linearization about
// a uniform state, using the exact discrete operator symbols. Supporting
// evidence printed when the pattern scenario fails.
double max_discrete_growth_rate(const ModelParams& p, const GridSpec& g,
                                const DiscreteKernel* kernel, double n_eq, double w_eq) {
    using cd = std::complex<double>;
    const Jacobian2 jac = kinetics_jacobian(n_eq, w_eq, p);
    const double h = g.hx;
    double best = -1e300;
    for (int iy = 0; iy <= g.ny / 2; ++iy)
        for (int ix = 0; ix <= g.nx / 2; ++ix) {
            if (ix == 0 && iy == 0) continue;
            const double kx = 2.0 * kPi * ix / g.lx, ky = 2.0 * kPi * iy / g.ly;
            cd disp_n;
            if (kernel) {
                cd s = 0.0;
                for (int dy = -kernel->half_width_y(); dy <= kernel->half_width_y(); ++dy)
                    for (int dx = -kernel->half_width_x(); dx <= kernel->half_width_x(); ++dx) {
                        const double w = kernel->weight(dx, dy);
                        if (w != 0.0)
                            s += w * (std::exp(cd(0.0, kx * dx * h + ky * dy * h)) - 1.0);
                    }
                disp_n = p.d1 * s;
            } else {
                const double lap =
                    -(4.0 / (h * h)) * (std::sin(kx * h / 2) * std::sin(kx * h / 2) +
                                        std::sin(ky * h / 2) * std::sin(ky * h / 2));
                disp_n = p.d1 * lap;
            }
            const double lap_w =
                -(4.0 / (h * h)) * (std::sin(kx * h / 2) * std::sin(kx * h / 2) +
                                    std::sin(ky * h / 2) * std::sin(ky * h / 2));
            const cd disp_w = p.d2 * lap_w + p.v * (std::exp(cd(0.0, kx * h)) - 1.0) / h;
            const cd a11 = jac.fn + disp_n, a12 = jac.fw, a21 = jac.gn, a22 = jac.gw + disp_w;
            const cd tr = a11 + a22, det = a11 * a22 - a12 * a21;
            const cd sq = std::sqrt(tr * tr - 4.0 * det);
            best = std::max({best, ((tr + sq) / 2.0).real(), ((tr - sq) / 2.0).real()});
        }
    return best;
}

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> body;
};

// results shared between scenarios 6 and 8
PatternMetrics g_metrics_sigma1;
bool g_have_sigma1 = false;

bool criterion_equilibria(std::string& detail) {
    const ModelParams p;  // reference defaults: a = 0.15, alpha = 0.045
    const AnalysisReport rep = analyze_model(p);
    bool ok = rep.eq.bare_soil[0] == 0.0 && rep.eq.bare_soil[1] == 0.15;
    ok = ok && rep.eq.vegetated.size() == 2;
    if (ok) {
        const auto& lo = rep.eq.vegetated[0];
        const auto& hi = rep.eq.vegetated[1];
        ok = ok && std::abs(lo[0] - 1.0 / 3.0) <= 1e-12 && std::abs(lo[1] - 0.135) <= 1e-12;
        ok = ok && std::abs(hi[0] - 3.0) <= 1e-12 && std::abs(hi[1] - 0.015) <= 1e-12;
        for (const auto& e : rep.eq.vegetated) {
            const double resid =
                std::abs(f_kinetics(e[0], e[1], p)) + std::abs(g_kinetics(e[0], e[1], p));
            ok = ok && resid <= 1e-12;
        }
    }
    if (!ok) detail = "equilibria or residuals out of tolerance";
    return ok;
}

bool criterion_lemma21(std::string& detail) {
    const GridSpec g = make_grid(20.0, 20.0, 16, 16);
    const DiscreteKernel k = build_kernel(g, {1.0, 4.0});
    std::mt19937 rng(2024);
    const double area2 = g.area() * g.area();
    for (int trial = 0; trial < 100; ++trial) {
        const Field v = random_field(g, rng, -3.0, 3.0);
        const Field w = random_field(g, rng, -3.0, 3.0);
        const auto [r1, r2] = lemma21_identity_residuals(k, v, w);
        if (!(r1 <= 1e-12 * linf_norm(v) * linf_norm(w) * area2)) {
            detail = "identity residual r1 = " + std::to_string(r1) + " at trial " +
                     std::to_string(trial);
            return false;
        }
        if (!(r2 >= -1e-12)) {
            detail = "quadratic-form value r2 = " + std::to_string(r2) + " at trial " +
                     std::to_string(trial);
            return false;
        }
    }
    return true;
}

bool criterion_operator_identities(std::string& detail) {
    const GridSpec g = make_grid(20.0, 20.0, 64, 64);
    const DiscreteKernel k = build_kernel(g, {1.0, 4.0});
    const Field const_out = apply_nonlocal_direct(k, Field(g, 3.7));
    for (double v : const_out.values)
        if (v != 0.0) {
            detail = "Gamma(constant) not exactly zero";
            return false;
        }
    std::mt19937 rng(2025);
    for (int trial = 0; trial < 100; ++trial) {
        const Field z = random_field(g, rng, -5.0, 5.0);
        const Field gz = apply_nonlocal_direct(k, z);
        if (!(linf_norm(gz) <= 2.0 * k.lambda_disc() * linf_norm(z) * (1.0 + 1e-14))) {
            detail = "sup-norm bound violated at trial " + std::to_string(trial);
            return false;
        }
        if (!(std::abs(integral(gz)) <= 1e-9 * linf_norm(z) * g.area())) {
            detail = "integral bound violated at trial " + std::to_string(trial);
            return false;
        }
    }
    return true;
}

bool criterion_fft_direct(std::string& detail) {
    const GridSpec g = make_grid(64.0, 64.0, 64, 64);
    double worst_overall = 0.0;
    for (double sigma : {0.5, 1.0, 5.0}) {
        const DiscreteKernel k = build_kernel(g, {sigma, 4.0});
        const FftConvolver conv(g, k.half_width_x(), k.half_width_y(), k.stencil());
        std::mt19937 rng(2026);
        for (int trial = 0; trial < 20; ++trial) {
            const Field z = random_field(g, rng, -100.0, 100.0);
            const Field fast = apply_nonlocal_fft(conv, k, z);
            const Field slow = apply_nonlocal_direct(k, z);
            double worst = 0.0;
            for (std::size_t c = 0; c < z.values.size(); ++c)
                worst = std::max(worst, std::abs(fast.values[c] - slow.values[c]));
            worst_overall = std::max(worst_overall, worst);
            if (!(worst <= 1e-10)) {
                detail = "max |fft - direct| = " + std::to_string(worst) + " for sigma " +
                         std::to_string(sigma);
                return false;
            }
        }
    }
    std::ostringstream os;
    os << "max |fft - direct| = " << worst_overall;
    detail = os.str();
    return true;
}

bool criterion_comparison(std::string& detail) {
    const GridSpec g = make_grid(20.0, 20.0, 16, 16);
    const DiscreteKernel k = build_kernel(g, {1.0, 4.0});
    std::mt19937 rng(2027);
    for (int trial = 0; trial < 25; ++trial) {
        const Field zeta0 = random_field(g, rng, 0.0, 1.0);
        const ComparisonResult res =
            comparison_oracle(k, [](double z) { return -z; }, zeta0, Field(g, 0.1), 0.05, 1.0);
        if (!res.holds) {
            detail = "linear-decay instance " + std::to_string(trial) + " violated at step " +
                     std::to_string(res.violating_step);
            return false;
        }
    }
    for (int trial = 0; trial < 25; ++trial) {
        const Field zeta0 = random_field(g, rng, 0.0, 0.1);
        const Field gap = random_field(g, rng, 0.0, 0.05);
        const ComparisonResult res =
            comparison_oracle(k, [](double z) { return z * z; }, zeta0, gap, 0.02, 1.0);
        if (!res.holds) {
            detail = "small-data quadratic instance " + std::to_string(trial) +
                     " violated at step " + std::to_string(res.violating_step);
            return false;
        }
    }
    return true;
}

bool criterion_boundedness(std::string& detail) {
    RunConfig cfg;  // reference defaults: nonlocal, sigma 1, t_end 200, auto dt, fft path
    const TrialRun run = integrate(cfg, 2000);
    if (!(run.w0_inf <= 10.4249)) {
        detail = "|w0|_inf = " + std::to_string(run.w0_inf) + " above the analytic bound";
        return false;
    }
    const ModelParams p = cfg.params();
    const double mass_cap =
        std::max(run.mass0, p.a * cfg.grid().area() / std::min(p.alpha, 1.0)) * 1.01;
    for (const DiagRecord& d : run.trace) {
        if (!(d.n_min >= -1e-12 && d.w_min >= -1e-12)) {
            detail = "negativity at snapshot step " + std::to_string(d.step_index);
            return false;
        }
        if (!(d.w_inf <= run.w_sup_bound + 1e-9)) {
            detail = "water sup bound violated at snapshot step " + std::to_string(d.step_index);
            return false;
        }
        if (!(d.mass <= mass_cap)) {
            detail = "total mass " + std::to_string(d.mass) + " above the decay bound at step " +
                     std::to_string(d.step_index);
            return false;
        }
    }
    g_metrics_sigma1 = pattern_metrics(run.final_state.n);
    g_have_sigma1 = true;
    std::ostringstream os;
    os << "dt = " << run.dt << " after " << run.attempts << " attempt(s), " << run.trace.size()
       << " snapshots";
    detail = os.str();
    return true;
}

bool criterion_stationarity(std::string& detail) {
    const GridSpec g = make_grid(20.0, 20.0, 32, 32);
    const ModelParams p;
    const DiscreteKernel k = build_kernel(g, {1.0, 4.0});
    const EquilibriumSet eq = equilibria(p);
    std::vector<std::array<double, 2>> states = {eq.bare_soil};
    states.insert(states.end(), eq.vegetated.begin(), eq.vegetated.end());
    for (const auto& e : states) {
        SimState s;
        s.n = Field(g, e[0]);
        s.w = Field(g, e[1]);
        const double dt =
            0.9 * stability_limit(p, g, &k, std::max(e[0], 1e-6), std::max(e[1], 1e-6));
        Stepper st(p, g, &k, ConvPath::fft, std::max(e[1], p.a));
        for (int i = 0; i < 1000; ++i) st.step_inplace(s, dt);
        double drift = 0.0;
        for (double v : s.n.values) drift = std::max(drift, std::abs(v - e[0]));
        for (double v : s.w.values) drift = std::max(drift, std::abs(v - e[1]));
        if (!(drift <= 1e-10)) {
            detail =
                "drift " + std::to_string(drift) + " from equilibrium n = " + std::to_string(e[0]);
            return false;
        }
    }
    return true;
}

bool criterion_patterns(std::string& detail) {
    std::ostringstream os;
    if (!g_have_sigma1) {
        detail = "sigma = 1 run unavailable (scenario 6 failed)";
        return false;
    }
    RunConfig local_cfg;
    local_cfg.mode = ModelMode::local;
    local_cfg.d2 = 0.0;
    const TrialRun local_run = integrate(local_cfg, 10000);
    const PatternMetrics m_local = pattern_metrics(local_run.final_state.n);

    RunConfig s5_cfg;
    s5_cfg.sigma = 5.0;
    s5_cfg.cutoff_radii = 3.5;  // 4 sigma would not fit the 20x20 domain
    const TrialRun s5_run = integrate(s5_cfg, 10000);
    const PatternMetrics m_s5 = pattern_metrics(s5_run.final_state.n);

    const bool cv_ok = m_local.cv > 0.1 && g_metrics_sigma1.cv > 0.1;
    const bool wavelength_ok = m_s5.dominant_wavelength >= g_metrics_sigma1.dominant_wavelength;

    os << "cv(local) = " << m_local.cv << ", cv(nonlocal s1) = " << g_metrics_sigma1.cv
       << " vs threshold 0.1; wavelength s5 = " << m_s5.dominant_wavelength
       << " >= s1 = " << g_metrics_sigma1.dominant_wavelength
       << (wavelength_ok ? " holds" : " fails");
    if (!cv_ok) {
        // Supporting evidence: the uniform vegetated state admits no growing
        // mode in either discretization, so heterogeneity above the threshold
        // cannot persist to t = 200 at these parameters.
        const GridSpec g = make_grid(20.0, 20.0, 150, 150);
        ModelParams p_loc;
        p_loc.mode = ModelMode::local;
        p_loc.d2 = 0.0;
        ModelParams p_nl;
        const DiscreteKernel k = build_kernel(g, {1.0, 4.0});
        os << "; heterogeneity check failed: max Re lambda over all modes at (3, 0.015) is "
           << max_discrete_growth_rate(p_loc, g, nullptr, 3.0, 0.015) << " (local), "
           << max_discrete_growth_rate(p_nl, g, &k, 3.0, 0.015)
           << " (nonlocal): the uniform vegetated state is linearly stable and the final states "
              "are near-uniform";
    }
    detail = os.str();
    return cv_ok && wavelength_ok;
}

bool criterion_turing_report(std::string& detail) {
    const ModelParams p;
    const TuringReport r = turing_report(p, 3.0, 0.015);
    bool ok = std::abs(r.trace - (-9.955)) <= 1e-12 && std::abs(r.det - 0.36) <= 1e-12;
    const std::array<bool, 4> expect_printed{false, false, true, true};
    const std::array<bool, 4> expect_standard{true, true, false, true};
    ok = ok && r.printed_conditions == expect_printed && r.standard_conditions == expect_standard;

    AnalysisReport rep = analyze_model(p);
    std::ostringstream rendered;
    print_analysis(rendered, rep);
    const std::string text = rendered.str();
    ok = ok && text.find("cross-partial condition set") != std::string::npos &&
         text.find("standard trace/determinant condition set") != std::string::npos;
    if (!ok) detail = "trace/det or condition labels out of contract";
    return ok;
}

bool criterion_io_fidelity(std::string& detail) {
    const fs::path base = fs::path("acceptance_out");
    fs::remove_all(base);
    fs::create_directories(base);

    // raw round trip, bitwise
    const GridSpec g = make_grid(20.0, 20.0, 64, 64);
    std::mt19937 rng(2028);
    const Field f = random_field(g, rng, -1e3, 1e3);
    write_field_raw(base / "probe.raw", f, 123.456);
    const Field back = to_field(read_field_raw(base / "probe.raw"), g);
    if (std::memcmp(f.values.data(), back.values.data(), f.values.size() * sizeof(double)) != 0) {
        detail = "raw round trip not bitwise";
        return false;
    }

    // manifest-driven rerun, bitwise snapshots
    RunConfig cfg;
    cfg.nx = 32;
    cfg.ny = 32;
    cfg.t_end = 0.5;
    cfg.snapshot_stride = 20;
    cfg.fmt_csv = false;
    cfg.fmt_pgm = false;
    cfg.fmt_raw = true;
    cfg.out_dir = (base / "first").string();
    run_simulation(cfg);
    const RunConfig replay = config_from_manifest(base / "first" / "manifest.json");
    run_simulation(replay, (base / "second").string());
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(base / "first")) {
        if (entry.path().extension() != ".raw") continue;
        std::ifstream in_a(entry.path(), std::ios::binary);
        std::ifstream in_b(base / "second" / entry.path().filename(), std::ios::binary);
        const std::vector<char> a((std::istreambuf_iterator<char>(in_a)),
                                  std::istreambuf_iterator<char>());
        const std::vector<char> b((std::istreambuf_iterator<char>(in_b)),
                                  std::istreambuf_iterator<char>());
        if (a.empty() || a != b) {
            detail = "rerun mismatch in " + entry.path().filename().string();
            return false;
        }
        ++compared;
    }
    if (compared < 3) {
        detail = "too few raw snapshots compared";
        return false;
    }
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "closed-form equilibria and kinetic residuals", 1.0, criterion_equilibria},
        {2, "kernel integral identities on random pairs", 10.0, criterion_lemma21},
        {3, "nonlocal operator identities and bounds", 30.0, criterion_operator_identities},
        {4, "fft and direct convolution agreement", 60.0, criterion_fft_direct},
        {5, "comparison principle on randomized instances", 60.0, criterion_comparison},
        {6, "boundedness and nonnegativity of the reference run", 300.0, criterion_boundedness},
        {7, "uniform equilibria stay stationary for 1000 steps", 30.0, criterion_stationarity},
        {8, "pattern heterogeneity and kernel-width wavelength", 900.0, criterion_patterns},
        {9, "stability report values and dual condition labels", 1.0, criterion_turing_report},
        {10, "snapshot and manifest reproducibility", 10.0, criterion_io_fidelity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string suffix = detail.empty() ? "" : "\n       " + detail;
        std::printf("[%s] %2d. %s (%.2f s, budget %.0f s)%s\n", ok ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), secs, c.budget_seconds, suffix.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
