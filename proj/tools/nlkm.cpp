// Command-line front end: simulate, analyze, kernel-info, compare.
// Exit codes: 0 ok, 1 usage, 2 config error, 3 numerical invariant violation,
// 4 I/O error.

#include "nlkm/manifest.hpp"
#include "nlkm/runner.hpp"
#include "nlkm/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

// Configs may be plain key=value documents or previously written manifests
// (JSON with an embedded config_text), which makes reruns a one-liner.
nlkm::RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nlkm::IoError("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return nlkm::config_from_manifest(path);
    return nlkm::parse_config(text);
}

int cmd_simulate(const std::string& config_path, const std::optional<std::string>& out_dir) {
    const nlkm::RunConfig cfg = load_config(config_path);
    const nlkm::SimulationOutcome outcome = nlkm::run_simulation(cfg, out_dir);
    const auto& final_diag = outcome.result.trace.back();
    std::cout << "completed " << outcome.result.steps_taken << " steps to t = "
              << outcome.result.final_state.t << " (dt = " << outcome.result.dt_used << ")\n";
    std::cout << "final |n|_inf = " << final_diag.n_inf << ", |w|_inf = " << final_diag.w_inf
              << ", mass = " << final_diag.mass << ", clamped cells = " << final_diag.clamped_cells
              << "\n";
    std::cout << "wrote " << outcome.manifest.snapshots.size() << " snapshots and manifest.json to "
              << outcome.out_dir.string() << "\n";
    return 0;
}

int cmd_analyze(const std::string& config_path) {
    const nlkm::RunConfig cfg = load_config(config_path);
    const nlkm::AnalysisReport rep = nlkm::analyze_model(cfg.params());
    nlkm::print_analysis(std::cout, rep);
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw nlkm::IoError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
    const auto json_path = std::filesystem::path(cfg.out_dir) / "analysis.json";
    std::ofstream js(json_path);
    if (!js) throw nlkm::IoError("cannot open for writing: " + json_path.string());
    js << nlkm::to_json(rep).dump(2) << "\n";
    std::cout << "machine-readable report: " << json_path.string() << "\n";
    return 0;
}

int cmd_kernel_info(const std::string& config_path) {
    const nlkm::RunConfig cfg = load_config(config_path);
    nlkm::print_kernel_info(std::cout, nlkm::kernel_info(cfg));
    return 0;
}

int cmd_compare(const std::string& local_path, const std::string& nonlocal_path,
                const std::string& out_dir) {
    const nlkm::RunConfig cfg_local = load_config(local_path);
    const nlkm::RunConfig cfg_nonlocal = load_config(nonlocal_path);
    const nlkm::CompareOutcome out = nlkm::run_compare(cfg_local, cfg_nonlocal, out_dir);
    std::cout << "final-time biomass distance: L2 = " << out.l2_distance_n
              << ", Linf = " << out.linf_distance_n << "\n";
    std::cout << "local:    cv = " << out.metrics_local.cv
              << ", dominant wavelength = " << out.metrics_local.dominant_wavelength << "\n";
    std::cout << "nonlocal: cv = " << out.metrics_nonlocal.cv
              << ", dominant wavelength = " << out.metrics_nonlocal.dominant_wavelength << "\n";
    std::cout << "summary written to " << out_dir << "/compare.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local/nonlocal Klausmeier vegetation model toolkit"};
    app.set_version_flag("--version", std::string(nlkm::kToolVersion));
    app.require_subcommand(1);

    std::string config_path, out_dir, local_path, nonlocal_path;
    std::optional<std::string> out_override;

    auto* sim = app.add_subcommand("simulate", "integrate one model and write snapshots");
    sim->add_option("--config", config_path, "config file (key=value or manifest.json)")->required();
    std::string sim_out;
    auto* sim_out_opt = sim->add_option("--out", sim_out, "output directory (overrides config)");

    auto* ana = app.add_subcommand("analyze", "equilibria and stability condition report");
    ana->add_option("--config", config_path, "config file")->required();

    auto* kinfo = app.add_subcommand("kernel-info", "discrete kernel mass statistics");
    kinfo->add_option("--config", config_path, "config file")->required();

    auto* cmp = app.add_subcommand("compare", "run local and nonlocal models from the same start");
    cmp->add_option("--local", local_path, "config for the local model")->required();
    cmp->add_option("--nonlocal", nonlocal_path, "config for the nonlocal model")->required();
    cmp->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (*sim_out_opt) out_override = sim_out;
            return cmd_simulate(config_path, out_override);
        }
        if (ana->parsed()) return cmd_analyze(config_path);
        if (kinfo->parsed()) return cmd_kernel_info(config_path);
        if (cmp->parsed()) return cmd_compare(local_path, nonlocal_path, out_dir);
    } catch (const nlkm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlkm::NumericalError& e) {
        std::cerr << "numerical invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const nlkm::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    }
    return 1;
}
