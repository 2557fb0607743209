#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mongeo/errors.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

/// On-disk shape shared by maps, paths, and velocity fields: grid sizes,
/// horizon, and one (m+1) x (n+1) value block. A standalone map is the
/// degenerate case m = 0, T = 0 (a single row).
struct GridEnvelope {
    std::size_t n = 0;
    std::size_t m = 0;
    double T = 0.0;
    std::vector<double> values;

    void check() const {
        if (n == 0) throw IoError("grid envelope: need n >= 1");
        if (m >= 1 && !(T > 0.0)) throw IoError("grid envelope: need T > 0 when m >= 1");
        if (m == 0 && T != 0.0) throw IoError("grid envelope: a single row must have T = 0");
        if (values.size() != (n + 1) * (m + 1))
            throw IoError("grid envelope: value count does not match n, m");
    }
};

inline GridEnvelope envelope_of(const PathGrid& p) {
    return GridEnvelope{p.space.n, p.time.m, p.time.T, p.values};
}

inline GridEnvelope envelope_of(const VelocityField& v) {
    return GridEnvelope{v.space.n, v.time.m, v.time.T, v.values};
}

inline GridEnvelope envelope_of(const MonotoneMap& phi) {
    return GridEnvelope{phi.grid.n, 0, 0.0, phi.values};
}

inline PathGrid path_from_envelope(const GridEnvelope& e,
                                   SliceBounds bounds = SliceBounds::unit_range) {
    e.check();
    if (e.m == 0) throw IoError("expected a path (m >= 1), found a single-row map");
    return PathGrid(SpaceGrid(e.n), TimeGrid{e.m, e.T}, e.values, bounds);
}

inline MonotoneMap map_from_envelope(const GridEnvelope& e) {
    e.check();
    if (e.m != 0) throw IoError("expected a single-row map, found m >= 1 rows");
    return MonotoneMap(SpaceGrid(e.n), e.values);
}

inline VelocityField field_from_envelope(const GridEnvelope& e) {
    e.check();
    if (e.m == 0) throw IoError("expected a field (m >= 1), found a single-row map");
    return VelocityField(SpaceGrid(e.n), TimeGrid{e.m, e.T}, e.values);
}

/// Single velocity profile: one row, m = 0, T = 0.
inline GridEnvelope profile_envelope(std::size_t n, const std::vector<double>& profile) {
    return GridEnvelope{n, 0, 0.0, profile};
}

namespace detail {

inline std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Replace the target atomically: write a sibling temp file, then rename.
inline void commit_file(const std::string& path, const std::string& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << body;
        if (!out.flush()) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp + " over " + path + ": " + ec.message());
}

} // namespace detail

/// CSV layout: one header line `# mongeo v1, n=<n>, m=<m>, T=<T>`, then one
/// comma-separated line per time slice. Values are printed with %.17g so the
/// round trip is exact.
inline void write_csv(const std::string& path, const GridEnvelope& e) {
    e.check();
    std::string body;
    body.reserve(e.values.size() * 20);
    body += "# mongeo v1, n=" + std::to_string(e.n) + ", m=" + std::to_string(e.m) +
            ", T=" + detail::format_g17(e.T) + "\n";
    for (std::size_t k = 0; k <= e.m; ++k) {
        for (std::size_t j = 0; j <= e.n; ++j) {
            if (j) body += ',';
            body += detail::format_g17(e.values[k * (e.n + 1) + j]);
        }
        body += '\n';
    }
    detail::commit_file(path, body);
}

inline GridEnvelope read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");

    GridEnvelope e;
    if (std::sscanf(line.c_str(), "# mongeo v1, n=%zu, m=%zu, T=%lf", &e.n, &e.m, &e.T) != 3)
        throw IoError(path + ": bad header '" + line + "'");

    e.values.reserve((e.n + 1) * (e.m + 1));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() &&
                   (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
                ++pos;
            if (pos >= line.size()) break;
            char* end = nullptr;
            const double v = std::strtod(line.c_str() + pos, &end);
            if (end == line.c_str() + pos)
                throw IoError(path + ": unparseable value in row");
            e.values.push_back(v);
            pos = static_cast<std::size_t>(end - line.c_str());
            if (pos < line.size() && line[pos] == ',') ++pos;
        }
    }
    e.check();
    return e;
}

/// JSON layout: {"n": .., "m": .., "T": .., "values": [..]} with values in
/// row-major slice order.
inline void write_json(const std::string& path, const GridEnvelope& e) {
    e.check();
    nlohmann::json doc;
    doc["n"] = e.n;
    doc["m"] = e.m;
    doc["T"] = e.T;
    doc["values"] = e.values;
    detail::commit_file(path, doc.dump());
}

inline GridEnvelope read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    GridEnvelope e;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        e.n = doc.at("n").get<std::size_t>();
        e.m = doc.at("m").get<std::size_t>();
        e.T = doc.at("T").get<double>();
        e.values = doc.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& ex) {
        throw IoError(path + ": " + ex.what());
    }
    e.check();
    return e;
}

/// Dispatch on extension: .csv or .json.
inline void write_envelope(const std::string& path, const GridEnvelope& e) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        write_csv(path, e);
    else if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        write_json(path, e);
    else
        throw IoError(path + ": unknown extension, want .csv or .json");
}

inline GridEnvelope read_envelope(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return read_csv(path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        return read_json(path);
    throw IoError(path + ": unknown extension, want .csv or .json");
}

} // namespace mongeo
