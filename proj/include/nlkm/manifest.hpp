// Run manifest: the fully resolved configuration plus every derived quantity
// needed to reproduce a run bit-for-bit with the same binary, and the
// per-snapshot diagnostics table.
#pragma once

#include "nlkm/config.hpp"
#include "nlkm/errors.hpp"
#include "nlkm/snapshot_io.hpp"
#include "nlkm/stepper.hpp"
#include "nlkm/version.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace nlkm {

struct ManifestSnapshotRow {
    DiagRecord diag;
    WrittenSnapshot files;
};

struct RunManifest {
    std::string config_text;
    double hx = 0.0, hy = 0.0;
    double lambda_disc = 0.0;  // 0 in local mode
    StabilityLimits limits;
    double dt_used = 0.0;
    int dt_attempts = 1;  // auto-dt restarts are counted, see run_simulation
    double w_sup_bound = 0.0;
    std::int64_t steps_taken = 0;
    std::int64_t clamped_cells = 0;
    std::string started_utc, finished_utc;
    double wall_seconds = 0.0;
    std::vector<ManifestSnapshotRow> snapshots;
};

namespace detail {

inline std::string utc_now_string() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace detail

inline nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_text"] = m.config_text;
    j["derived"] = {
        {"hx", m.hx},
        {"hy", m.hy},
        {"lambda_disc", m.lambda_disc},
        {"dt_used", m.dt_used},
        {"dt_attempts", m.dt_attempts},
        {"w_sup_bound", m.w_sup_bound},
        {"steps_taken", m.steps_taken},
        {"clamped_cells", m.clamped_cells},
        {"stability_limits",
         {{"diffusion", m.limits.diffusion},
          {"advection", m.limits.advection},
          {"nonlocal", m.limits.nonlocal},
          {"kinetics", m.limits.kinetics},
          {"overall", m.limits.overall()}}},
    };
    j["wallclock"] = {{"started_utc", m.started_utc},
                      {"finished_utc", m.finished_utc},
                      {"seconds", m.wall_seconds}};
    j["snapshots"] = nlohmann::json::array();
    for (const auto& row : m.snapshots) {
        j["snapshots"].push_back({
            {"step", row.diag.step_index},
            {"t", row.diag.t},
            {"n_inf", row.diag.n_inf},
            {"w_inf", row.diag.w_inf},
            {"n_min", row.diag.n_min},
            {"w_min", row.diag.w_min},
            {"mass", row.diag.mass},
            {"clamped_cells", row.diag.clamped_cells},
            {"pgm_n_range", {row.files.n_min, row.files.n_max}},
            {"pgm_w_range", {row.files.w_min, row.files.w_max}},
            {"files", row.files.files},
        });
    }
    return j;
}

inline void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
    const auto path = dir / "manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << to_json(m).dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

/// Extracts the embedded configuration from a previously written manifest,
/// for bitwise-reproducing runs.
inline RunConfig config_from_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("malformed manifest " + path.string() + ": " + e.what());
    }
    if (!j.contains("config_text") || !j["config_text"].is_string())
        throw IoError("manifest missing config_text: " + path.string());
    return parse_config(j["config_text"].get<std::string>());
}

}  // namespace nlkm
