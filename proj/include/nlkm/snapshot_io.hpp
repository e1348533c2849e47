// Snapshot persistence. Three formats:
//   csv  - "# t=.. nx=.. ny=.. hx=.. hy=.. field=.." header, then ny rows of
//          nx comma-separated values at 17 significant digits.
//   raw  - 32-byte header (magic "NLKM", u32 nx, u32 ny, f64 t, reserved
//          zeros), then little-endian f64 payload, row-major, x fastest.
//   pgm  - binary P5, 16-bit, linear min-max normalization; the (min, max)
//          pair used goes into the run manifest. Degenerate constant fields
//          map to mid-gray.
#pragma once

#include "nlkm/errors.hpp"
#include "nlkm/grid.hpp"
#include "nlkm/stepper.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nlkm {

namespace detail {

inline void store_u32_le(unsigned char* p, std::uint32_t v) {
    p[0] = static_cast<unsigned char>(v);
    p[1] = static_cast<unsigned char>(v >> 8);
    p[2] = static_cast<unsigned char>(v >> 16);
    p[3] = static_cast<unsigned char>(v >> 24);
}

inline std::uint32_t load_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void store_f64_le(unsigned char* p, double x) {
    const std::uint64_t v = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) p[b] = static_cast<unsigned char>(v >> (8 * b));
}

inline double load_f64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(v);
}

}  // namespace detail

inline std::string snapshot_filename(const std::string& field, std::int64_t step,
                                     const std::string& ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%06lld.", static_cast<long long>(step));
    return field + buf + ext;
}

// --- CSV ---

inline void write_field_csv(const std::filesystem::path& path, const Field& f, double t,
                            const std::string& field_name) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    out << "# t=" << buf;
    out << " nx=" << f.grid.nx << " ny=" << f.grid.ny;
    std::snprintf(buf, sizeof(buf), "%.17g", f.grid.hx);
    out << " hx=" << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", f.grid.hy);
    out << " hy=" << buf << " field=" << field_name << "\n";
    for (int j = 0; j < f.grid.ny; ++j) {
        for (int i = 0; i < f.grid.nx; ++i) {
            std::snprintf(buf, sizeof(buf), "%.16e", f.at(i, j));
            if (i) out << ',';
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

struct CsvSnapshot {
    double t = 0.0, hx = 0.0, hy = 0.0;
    int nx = 0, ny = 0;
    std::string field_name;
    std::vector<double> values;
};

inline CsvSnapshot read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    CsvSnapshot snap;
    std::string header;
    if (!std::getline(in, header) || header.rfind("# ", 0) != 0)
        throw IoError("missing csv snapshot header: " + path.string());
    std::istringstream hs(header.substr(2));
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "t") snap.t = std::stod(val);
        else if (key == "nx") snap.nx = std::stoi(val);
        else if (key == "ny") snap.ny = std::stoi(val);
        else if (key == "hx") snap.hx = std::stod(val);
        else if (key == "hy") snap.hy = std::stod(val);
        else if (key == "field") snap.field_name = val;
    }
    snap.values.reserve(static_cast<std::size_t>(snap.nx) * snap.ny);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) snap.values.push_back(std::stod(cell));
    }
    if (snap.values.size() != static_cast<std::size_t>(snap.nx) * snap.ny)
        throw IoError("csv value count does not match header dimensions: " + path.string());
    return snap;
}

// --- RAW ---

inline constexpr char kRawMagic[4] = {'N', 'L', 'K', 'M'};
inline constexpr std::size_t kRawHeaderBytes = 32;

inline void write_field_raw(const std::filesystem::path& path, const Field& f, double t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    unsigned char header[kRawHeaderBytes] = {};
    std::memcpy(header, kRawMagic, 4);
    detail::store_u32_le(header + 4, static_cast<std::uint32_t>(f.grid.nx));
    detail::store_u32_le(header + 8, static_cast<std::uint32_t>(f.grid.ny));
    detail::store_f64_le(header + 12, t);
    out.write(reinterpret_cast<const char*>(header), kRawHeaderBytes);
    std::vector<unsigned char> payload(f.values.size() * 8);
    for (std::size_t k = 0; k < f.values.size(); ++k)
        detail::store_f64_le(payload.data() + 8 * k, f.values[k]);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

struct RawSnapshot {
    double t = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values;
};

inline RawSnapshot read_field_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    unsigned char header[kRawHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kRawHeaderBytes);
    if (!in || std::memcmp(header, kRawMagic, 4) != 0)
        throw IoError("not a raw snapshot (bad magic): " + path.string());
    RawSnapshot snap;
    snap.nx = static_cast<int>(detail::load_u32_le(header + 4));
    snap.ny = static_cast<int>(detail::load_u32_le(header + 8));
    snap.t = detail::load_f64_le(header + 12);
    const std::size_t count = static_cast<std::size_t>(snap.nx) * snap.ny;
    std::vector<unsigned char> payload(count * 8);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!in) throw IoError("truncated raw snapshot: " + path.string());
    snap.values.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        snap.values[k] = detail::load_f64_le(payload.data() + 8 * k);
    return snap;
}

inline Field to_field(const RawSnapshot& snap, const GridSpec& g) {
    if (snap.nx != g.nx || snap.ny != g.ny)
        throw IoError("raw snapshot dimensions " + std::to_string(snap.nx) + "x" +
                      std::to_string(snap.ny) + " do not match the configured grid");
    Field f(g);
    f.values = snap.values;
    return f;
}

// --- PGM ---

/// Returns the (min, max) pair used for normalization.
inline std::pair<double, double> write_field_pgm(const std::filesystem::path& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    const double lo = min_value(f), hi = max_value(f);
    out << "P5\n" << f.grid.nx << " " << f.grid.ny << "\n65535\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(f.grid.nx) * 2);
    for (int j = 0; j < f.grid.ny; ++j) {
        for (int i = 0; i < f.grid.nx; ++i) {
            std::uint16_t q = 32768;  // mid-gray for degenerate constant fields
            if (hi > lo) {
                const double s = (f.at(i, j) - lo) / (hi - lo);
                q = static_cast<std::uint16_t>(std::lround(s * 65535.0));
            }
            row[2 * static_cast<std::size_t>(i)] = static_cast<unsigned char>(q >> 8);  // MSB first
            row[2 * static_cast<std::size_t>(i) + 1] = static_cast<unsigned char>(q & 0xFF);
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw IoError("write failed: " + path.string());
    return {lo, hi};
}

// --- snapshot bundle ---

struct SnapshotFormats {
    bool csv = true, pgm = true, raw = false;
};

struct WrittenSnapshot {
    std::vector<std::string> files;  // names relative to the output directory
    double n_min = 0.0, n_max = 0.0, w_min = 0.0, w_max = 0.0;  // pgm normalization
};

inline WrittenSnapshot write_snapshot(const std::filesystem::path& dir, const SimState& state,
                                      const SnapshotFormats& fmts) {
    WrittenSnapshot out;
    auto emit = [&](const Field& f, const std::string& name) {
        if (fmts.csv) {
            const std::string fn = snapshot_filename(name, state.step_index, "csv");
            write_field_csv(dir / fn, f, state.t, name);
            out.files.push_back(fn);
        }
        if (fmts.raw) {
            const std::string fn = snapshot_filename(name, state.step_index, "raw");
            write_field_raw(dir / fn, f, state.t);
            out.files.push_back(fn);
        }
        if (fmts.pgm) {
            const std::string fn = snapshot_filename(name, state.step_index, "pgm");
            const auto range = write_field_pgm(dir / fn, f);
            out.files.push_back(fn);
            if (name == "n") {
                out.n_min = range.first;
                out.n_max = range.second;
            } else {
                out.w_min = range.first;
                out.w_max = range.second;
            }
        }
    };
    emit(state.n, "n");
    emit(state.w, "w");
    return out;
}

}  // namespace nlkm
