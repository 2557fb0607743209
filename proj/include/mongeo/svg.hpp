#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "mongeo/ch.hpp"
#include "mongeo/path_grid.hpp"

namespace mongeo {

inline constexpr int kSvgWidth = 800;
inline constexpr int kSvgHeight = 600;
inline constexpr std::size_t kSvgSnapshots = 9;

/// Fixed snapshot palette, early curves dark blue shading to late warm tones.
/// Output must be byte-identical across runs, so nothing here is randomized.
inline const char* svg_palette(std::size_t i) {
    static const char* colors[kSvgSnapshots] = {
        "#1f3a93", "#2e5fa3", "#3d84b3", "#4caa9f", "#5bc06b",
        "#9cc43e", "#d9b521", "#e07b1f", "#d43d2a",
    };
    return colors[i % kSvgSnapshots];
}

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct SvgCanvas {
    std::string body;
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    double margin = 60.0;

    double px(double x) const {
        return margin + (x - x_min) / (x_max - x_min) * (kSvgWidth - 2.0 * margin);
    }
    double py(double y) const {
        return kSvgHeight - margin - (y - y_min) / (y_max - y_min) * (kSvgHeight - 2.0 * margin);
    }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                  const char* color) {
        body += "<polyline fill=\"none\" stroke=\"";
        body += color;
        body += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) body += ' ';
            body += svg_num(px(xs[i])) + "," + svg_num(py(ys[i]));
        }
        body += "\"/>\n";
    }

    void label(double x, double y, const std::string& text, const char* color = "#444444") {
        body += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) +
                "\" font-family=\"monospace\" font-size=\"12\" fill=\"" + color + "\">" +
                text + "</text>\n";
    }

    std::string finish(const std::string& title) const {
        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
               std::to_string(kSvgWidth) + "\" height=\"" + std::to_string(kSvgHeight) +
               "\" viewBox=\"0 0 " + std::to_string(kSvgWidth) + " " +
               std::to_string(kSvgHeight) + "\">\n";
        out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
        out += "<rect x=\"" + svg_num(margin) + "\" y=\"" + svg_num(margin) + "\" width=\"" +
               svg_num(kSvgWidth - 2.0 * margin) + "\" height=\"" +
               svg_num(kSvgHeight - 2.0 * margin) +
               "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + svg_num(kSvgWidth / 2.0) +
               "\" y=\"30\" text-anchor=\"middle\" font-family=\"monospace\" "
               "font-size=\"16\" fill=\"#222222\">" +
               title + "</text>\n";
        out += body;
        out += "</svg>\n";
        return out;
    }
};

inline std::vector<std::size_t> snapshot_rows(std::size_t last) {
    std::vector<std::size_t> rows;
    rows.reserve(kSvgSnapshots);
    for (std::size_t i = 0; i < kSvgSnapshots; ++i) {
        const std::size_t k =
            (last == 0) ? 0
                        : (i * last + (kSvgSnapshots - 1) / 2) / (kSvgSnapshots - 1);
        if (rows.empty() || rows.back() != k) rows.push_back(k);
    }
    return rows;
}

} // namespace detail

/// Nine evenly spaced slices of a path, x against phi(t_k, x).
inline std::string render_path_svg(const PathGrid& p, const std::string& title) {
    detail::SvgCanvas canvas;
    const auto rows = detail::snapshot_rows(p.time.m);
    std::vector<double> xs(p.space.nodes());
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = p.space.node(j);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        canvas.polyline(xs, p.slice_values(rows[i]), svg_palette(i));
        canvas.label(kSvgWidth - 130.0, 60.0 + 16.0 * static_cast<double>(i),
                     "t=" + detail::svg_num(p.time.node(rows[i])), svg_palette(i));
    }
    canvas.label(canvas.px(0.5) - 10.0, kSvgHeight - 20.0, "x");
    canvas.label(16.0, canvas.py(0.5), "phi");
    return canvas.finish(title);
}

/// Nine recorded velocity profiles of an evolution; the vertical range adapts
/// to the data but the snapshot times and palette are fixed.
inline std::string render_evolution_svg(const EvolveResult& ev, const std::string& title) {
    detail::SvgCanvas canvas;
    const auto rows = detail::snapshot_rows(ev.steps_completed);
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k <= ev.steps_completed; ++k)
        for (std::size_t j = 0; j < ev.space.nodes(); ++j) {
            lo = std::min(lo, ev.state(k)[j]);
            hi = std::max(hi, ev.state(k)[j]);
        }
    if (hi <= lo) hi = lo + 1.0;
    canvas.y_min = lo - 0.05 * (hi - lo);
    canvas.y_max = hi + 0.05 * (hi - lo);

    std::vector<double> xs(ev.space.nodes());
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = ev.space.node(j);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        canvas.polyline(xs, ev.state_values(rows[i]), svg_palette(i));
        canvas.label(kSvgWidth - 130.0, 60.0 + 16.0 * static_cast<double>(i),
                     "t=" + detail::svg_num(ev.time.dt() * static_cast<double>(rows[i])),
                     svg_palette(i));
    }
    canvas.label(canvas.px(0.5) - 10.0, kSvgHeight - 20.0, "x");
    canvas.label(16.0, canvas.py(0.5 * (canvas.y_min + canvas.y_max)), "v");
    return canvas.finish(title);
}

} // namespace mongeo
