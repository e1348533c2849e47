// Run configuration: a flat key = value document with '#' comments. Defaults
// mirror the reference experiment (150x150 cells on [0,20]^2, d1=0.05,
// d2=0.003, v=5, a=0.15, alpha=0.045, Gaussian sigma=1, t_end=200). Every
// parse or constraint failure carries the offending line number.
#pragma once

#include "nlkm/errors.hpp"
#include "nlkm/grid.hpp"
#include "nlkm/kernel.hpp"
#include "nlkm/reaction.hpp"
#include "nlkm/stepper.hpp"

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace nlkm {

enum class InitKind { reference_profiles, uniform_plus_noise, from_file };

inline const char* to_string(InitKind k) {
    switch (k) {
        case InitKind::reference_profiles: return "reference_profiles";
        case InitKind::uniform_plus_noise: return "uniform_plus_noise";
        case InitKind::from_file: return "from_file";
    }
    return "?";
}

struct RunConfig {
    ModelMode mode = ModelMode::nonlocal;
    double d1 = 0.05;
    double d2 = 0.003;  // preset to 0 when mode=local and d2 is not given
    double v = 5.0;
    double a = 0.15;
    double alpha = 0.045;

    double lx = 20.0, ly = 20.0;
    int nx = 150, ny = 150;

    double sigma = 1.0;
    double cutoff_radii = 4.0;

    std::optional<double> dt;  // unset: safety * stability limit
    double t_end = 200.0;
    double safety = 0.9;
    std::int64_t snapshot_stride = 1000;

    InitKind init = InitKind::reference_profiles;
    double noise_amplitude = 0.1;
    std::uint64_t noise_seed = 1;
    std::string init_n_file, init_w_file;

    std::string out_dir = "out";
    bool fmt_csv = true, fmt_pgm = true, fmt_raw = false;
    ConvPath conv = ConvPath::fft;

    ModelParams params() const { return {d1, d2, v, a, alpha, mode}; }
    GridSpec grid() const { return make_grid(lx, ly, nx, ny); }
    KernelSpec kernel_spec() const { return {sigma, cutoff_radii}; }
    StepControl control() const { return {dt, t_end, safety, snapshot_stride}; }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

[[noreturn]] inline void fail_at(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

inline double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) fail_at(line, "trailing characters after number '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail_at(line, "expected a number, got '" + v + "'");
    }
}

inline std::int64_t parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) fail_at(line, "trailing characters after integer '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail_at(line, "expected an integer, got '" + v + "'");
    }
}

}  // namespace detail

/// Parses the key = value document, applies defaults, and validates every
/// constraint. In local mode an unset d2 is preset to 0 (the local model has
/// no water diffusion term).
inline RunConfig parse_config(const std::string& text) {
    using detail::fail_at;
    RunConfig cfg;
    std::optional<double> d2_explicit;
    std::map<std::string, int> seen;  // key -> line, for duplicate and constraint reporting

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail_at(line_no, "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) fail_at(line_no, "empty key");
        if (val.empty()) fail_at(line_no, "empty value for key '" + key + "'");
        if (!seen.emplace(key, line_no).second)
            fail_at(line_no, "duplicate key '" + key + "' (first set on line " +
                                 std::to_string(seen[key]) + ")");

        if (key == "mode") {
            if (val == "local") cfg.mode = ModelMode::local;
            else if (val == "nonlocal") cfg.mode = ModelMode::nonlocal;
            else fail_at(line_no, "mode must be 'local' or 'nonlocal', got '" + val + "'");
        } else if (key == "d1") cfg.d1 = detail::parse_double(val, line_no);
        else if (key == "d2") d2_explicit = detail::parse_double(val, line_no);
        else if (key == "v") cfg.v = detail::parse_double(val, line_no);
        else if (key == "a") cfg.a = detail::parse_double(val, line_no);
        else if (key == "alpha") cfg.alpha = detail::parse_double(val, line_no);
        else if (key == "lx") cfg.lx = detail::parse_double(val, line_no);
        else if (key == "ly") cfg.ly = detail::parse_double(val, line_no);
        else if (key == "nx") cfg.nx = static_cast<int>(detail::parse_int(val, line_no));
        else if (key == "ny") cfg.ny = static_cast<int>(detail::parse_int(val, line_no));
        else if (key == "sigma") cfg.sigma = detail::parse_double(val, line_no);
        else if (key == "cutoff_radii") cfg.cutoff_radii = detail::parse_double(val, line_no);
        else if (key == "dt") {
            if (val == "auto") cfg.dt.reset();
            else cfg.dt = detail::parse_double(val, line_no);
        } else if (key == "t_end") cfg.t_end = detail::parse_double(val, line_no);
        else if (key == "safety") cfg.safety = detail::parse_double(val, line_no);
        else if (key == "snapshot_stride") cfg.snapshot_stride = detail::parse_int(val, line_no);
        else if (key == "init") {
            if (val == "reference_profiles") cfg.init = InitKind::reference_profiles;
            else if (val == "uniform_plus_noise") cfg.init = InitKind::uniform_plus_noise;
            else if (val == "from_file") cfg.init = InitKind::from_file;
            else fail_at(line_no, "unknown init '" + val + "'");
        } else if (key == "noise_amplitude") cfg.noise_amplitude = detail::parse_double(val, line_no);
        else if (key == "noise_seed") cfg.noise_seed = static_cast<std::uint64_t>(detail::parse_int(val, line_no));
        else if (key == "init_n_file") cfg.init_n_file = val;
        else if (key == "init_w_file") cfg.init_w_file = val;
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "formats") {
            cfg.fmt_csv = cfg.fmt_pgm = cfg.fmt_raw = false;
            std::stringstream fs(val);
            std::string tok;
            while (std::getline(fs, tok, ',')) {
                tok = detail::trim(tok);
                if (tok == "csv") cfg.fmt_csv = true;
                else if (tok == "pgm") cfg.fmt_pgm = true;
                else if (tok == "raw") cfg.fmt_raw = true;
                else fail_at(line_no, "unknown format '" + tok + "' (expected csv, pgm, raw)");
            }
        } else if (key == "conv") {
            if (val == "fft") cfg.conv = ConvPath::fft;
            else if (val == "direct") cfg.conv = ConvPath::direct;
            else fail_at(line_no, "conv must be 'fft' or 'direct', got '" + val + "'");
        } else {
            fail_at(line_no, "unknown key '" + key + "'");
        }
    }

    cfg.d2 = d2_explicit ? *d2_explicit : (cfg.mode == ModelMode::local ? 0.0 : 0.003);

    auto where = [&](const char* key) {
        const auto it = seen.find(key);
        return it == seen.end() ? std::string("config") : "config line " + std::to_string(it->second);
    };
    auto require = [&](bool ok, const char* key, const std::string& msg) {
        if (!ok) throw ConfigError(where(key) + ": " + msg);
    };

    require(cfg.lx > 0.0, "lx", "lx must be positive");
    require(cfg.ly > 0.0, "ly", "ly must be positive");
    require(cfg.nx >= 3, "nx", "nx must be at least 3");
    require(cfg.ny >= 3, "ny", "ny must be at least 3");
    require(cfg.d1 > 0.0, "d1", "d1 must be positive");
    if (cfg.mode == ModelMode::nonlocal)
        require(cfg.d2 > 0.0, "d2", "d2 must be positive in nonlocal mode");
    require(cfg.d2 >= 0.0, "d2", "d2 must be nonnegative");
    require(!(cfg.d2 > 0.0 && cfg.d1 == cfg.d2), "d2",
            "d1 and d2 must differ (equal diffusivities are not supported)");
    require(cfg.v >= 0.0, "v", "v must be nonnegative");
    require(cfg.a > 0.0, "a", "a must be positive");
    require(cfg.alpha > 0.0, "alpha", "alpha must be positive");
    if (cfg.mode == ModelMode::nonlocal) {
        require(cfg.sigma > 0.0, "sigma", "sigma must be positive");
        require(cfg.cutoff_radii >= 1.0, "cutoff_radii", "cutoff_radii must be at least 1");
        require(cfg.cutoff_radii * cfg.sigma < std::min(cfg.lx, cfg.ly), "sigma",
                "kernel truncation radius cutoff_radii*sigma must be smaller than min(lx, ly)");
    }
    if (cfg.dt) require(*cfg.dt > 0.0, "dt", "dt must be positive");
    require(cfg.t_end >= 0.0, "t_end", "t_end must be nonnegative");
    require(cfg.safety > 0.0 && cfg.safety <= 1.0, "safety", "safety must lie in (0, 1]");
    require(cfg.snapshot_stride >= 1, "snapshot_stride", "snapshot_stride must be at least 1");
    require(cfg.noise_amplitude >= 0.0, "noise_amplitude", "noise_amplitude must be nonnegative");
    if (cfg.init == InitKind::from_file) {
        require(!cfg.init_n_file.empty(), "init", "init=from_file requires init_n_file");
        require(!cfg.init_w_file.empty(), "init", "init=from_file requires init_w_file");
    }
    require(cfg.fmt_csv || cfg.fmt_pgm || cfg.fmt_raw, "formats", "at least one output format");
    return cfg;
}

/// Canonical full rendering; parse(render(cfg)) == cfg.
inline std::string render_config(const RunConfig& cfg) {
    using detail::fmt_double;
    std::ostringstream out;
    out << "mode = " << to_string(cfg.mode) << "\n";
    out << "d1 = " << fmt_double(cfg.d1) << "\n";
    out << "d2 = " << fmt_double(cfg.d2) << "\n";
    out << "v = " << fmt_double(cfg.v) << "\n";
    out << "a = " << fmt_double(cfg.a) << "\n";
    out << "alpha = " << fmt_double(cfg.alpha) << "\n";
    out << "lx = " << fmt_double(cfg.lx) << "\n";
    out << "ly = " << fmt_double(cfg.ly) << "\n";
    out << "nx = " << cfg.nx << "\n";
    out << "ny = " << cfg.ny << "\n";
    out << "sigma = " << fmt_double(cfg.sigma) << "\n";
    out << "cutoff_radii = " << fmt_double(cfg.cutoff_radii) << "\n";
    out << "dt = " << (cfg.dt ? fmt_double(*cfg.dt) : std::string("auto")) << "\n";
    out << "t_end = " << fmt_double(cfg.t_end) << "\n";
    out << "safety = " << fmt_double(cfg.safety) << "\n";
    out << "snapshot_stride = " << cfg.snapshot_stride << "\n";
    out << "init = " << to_string(cfg.init) << "\n";
    out << "noise_amplitude = " << fmt_double(cfg.noise_amplitude) << "\n";
    out << "noise_seed = " << cfg.noise_seed << "\n";
    if (!cfg.init_n_file.empty()) out << "init_n_file = " << cfg.init_n_file << "\n";
    if (!cfg.init_w_file.empty()) out << "init_w_file = " << cfg.init_w_file << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    std::string fmts;
    if (cfg.fmt_csv) fmts += "csv";
    if (cfg.fmt_pgm) fmts += fmts.empty() ? "pgm" : ",pgm";
    if (cfg.fmt_raw) fmts += fmts.empty() ? "raw" : ",raw";
    out << "formats = " << fmts << "\n";
    out << "conv = " << (cfg.conv == ConvPath::fft ? "fft" : "direct") << "\n";
    return out.str();
}

}  // namespace nlkm
