#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydsim/config.hpp"
#include "rydsim/trajectory.hpp"
#include "rydsim/version.hpp"

namespace rydsim {

enum class Format { Csv, Json };

inline Format parse_format(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw DomainError("unknown format '" + name + "' (expected csv or json)");
}

namespace detail {

// 12 significant digits everywhere; enough for 1e-12 relative round
// trips and stable across platforms.
inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json config_json(const RunConfig* config) {
    nlohmann::json j = nlohmann::json::object();
    if (config)
        for (const auto& [key, value] : config->resolved) j[key] = value;
    return j;
}

}  // namespace detail

// ---- time series ----------------------------------------------------

inline std::string timeseries_csv(const Trajectory& traj) {
    std::string out = "time_ns,im_rho21,rho11,rho22,rho33\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out += detail::fmt(traj.times[i] * 1e9);
        out += ',';
        out += detail::fmt(traj.im_rho21[i]);
        out += ',';
        out += detail::fmt(traj.rho11[i]);
        out += ',';
        out += detail::fmt(traj.rho22[i]);
        out += ',';
        out += detail::fmt(traj.rho33[i]);
        out += '\n';
    }
    return out;
}

inline std::string timeseries_json(const Trajectory& traj, const RunConfig* config) {
    nlohmann::json j;
    j["artifact"] = "rydsim";
    j["version"] = version;
    j["config"] = detail::config_json(config);
    std::vector<double> time_ns(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) time_ns[i] = traj.times[i] * 1e9;
    j["time_ns"] = time_ns;
    j["im_rho21"] = traj.im_rho21;
    j["rho11"] = traj.rho11;
    j["rho22"] = traj.rho22;
    j["rho33"] = traj.rho33;
    return j.dump(2) + "\n";
}

inline void write_timeseries(const Trajectory& traj, const std::string& path, Format format,
                             const RunConfig* config = nullptr) {
    detail::write_file(path, format == Format::Csv ? timeseries_csv(traj)
                                                   : timeseries_json(traj, config));
}

inline Trajectory read_timeseries(const std::string& path, Format format) {
    const std::string content = detail::read_file(path);
    Trajectory traj;
    if (format == Format::Json) {
        const auto j = nlohmann::json::parse(content);
        for (double t : j.at("time_ns")) traj.times.push_back(t * 1e-9);
        traj.im_rho21 = j.at("im_rho21").get<std::vector<double>>();
        traj.rho11 = j.at("rho11").get<std::vector<double>>();
        traj.rho22 = j.at("rho22").get<std::vector<double>>();
        traj.rho33 = j.at("rho33").get<std::vector<double>>();
        return traj;
    }
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line != "time_ns,im_rho21,rho11,rho22,rho33")
        throw IoError("'" + path + "': unexpected CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, im21, r11, r22, r33;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &im21, &r11, &r22, &r33) != 5)
            throw IoError("'" + path + "': malformed CSV row '" + line + "'");
        traj.times.push_back(t * 1e-9);
        traj.im_rho21.push_back(im21);
        traj.rho11.push_back(r11);
        traj.rho22.push_back(r22);
        traj.rho33.push_back(r33);
    }
    return traj;
}

// ---- scan maps -------------------------------------------------------

inline std::string map_csv(const ScanResult& scan) {
    std::string out = "param,time_ns,im_rho21,rho33\n";
    for (std::size_t r = 0; r < scan.params.size(); ++r) {
        const std::string param = detail::fmt(scan.params[r]);
        for (std::size_t k = 0; k < scan.times.size(); ++k) {
            out += param;
            out += ',';
            out += detail::fmt(scan.times[k] * 1e9);
            out += ',';
            out += detail::fmt(scan.im_rho21[r][k]);
            out += ',';
            out += detail::fmt(scan.rho33[r][k]);
            out += '\n';
        }
    }
    return out;
}

inline std::string map_json(const ScanResult& scan, const RunConfig* config) {
    nlohmann::json j;
    j["artifact"] = "rydsim";
    j["version"] = version;
    j["config"] = detail::config_json(config);
    j["param_name"] = scan.param_name;
    j["param"] = scan.params;
    std::vector<double> time_ns(scan.times.size());
    for (std::size_t i = 0; i < scan.times.size(); ++i) time_ns[i] = scan.times[i] * 1e9;
    j["time_ns"] = time_ns;
    j["im_rho21"] = scan.im_rho21;
    j["rho33"] = scan.rho33;
    return j.dump(2) + "\n";
}

inline void write_map(const ScanResult& scan, const std::string& path, Format format,
                      const RunConfig* config = nullptr) {
    detail::write_file(path,
                       format == Format::Csv ? map_csv(scan) : map_json(scan, config));
}

inline ScanResult read_map(const std::string& path, Format format) {
    const std::string content = detail::read_file(path);
    ScanResult scan;
    if (format == Format::Json) {
        const auto j = nlohmann::json::parse(content);
        scan.param_name = j.value("param_name", "");
        scan.params = j.at("param").get<std::vector<double>>();
        for (double t : j.at("time_ns")) scan.times.push_back(t * 1e-9);
        scan.im_rho21 = j.at("im_rho21").get<std::vector<std::vector<double>>>();
        scan.rho33 = j.at("rho33").get<std::vector<std::vector<double>>>();
        return scan;
    }
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line != "param,time_ns,im_rho21,rho33")
        throw IoError("'" + path + "': unexpected CSV header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double param, t, im21, r33;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &param, &t, &im21, &r33) != 4)
            throw IoError("'" + path + "': malformed CSV row '" + line + "'");
        if (scan.params.empty() || scan.params.back() != param) {
            scan.params.push_back(param);
            scan.im_rho21.emplace_back();
            scan.rho33.emplace_back();
        }
        if (scan.params.size() == 1) scan.times.push_back(t * 1e-9);
        scan.im_rho21.back().push_back(im21);
        scan.rho33.back().push_back(r33);
    }
    return scan;
}

// Resolved-config sidecar written next to CSV outputs, which carry no
// metadata of their own.
inline void write_metadata(const RunConfig& config, const std::string& path) {
    nlohmann::json j;
    j["artifact"] = "rydsim";
    j["version"] = version;
    j["config"] = detail::config_json(&config);
    detail::write_file(path, j.dump(2) + "\n");
}

// ---- SVG heatmap -----------------------------------------------------

namespace detail {

// Compact viridis approximation; linear interpolation between anchors.
inline std::string viridis(double u) {
    static constexpr double stops[9][3] = {
        {0.267, 0.005, 0.329}, {0.281, 0.155, 0.469}, {0.244, 0.290, 0.537},
        {0.191, 0.407, 0.556}, {0.148, 0.508, 0.557}, {0.128, 0.605, 0.533},
        {0.208, 0.719, 0.473}, {0.478, 0.821, 0.318}, {0.993, 0.906, 0.144}};
    u = std::clamp(u, 0.0, 1.0);
    const double x = u * 8.0;
    const int i = std::min(7, static_cast<int>(x));
    const double f = x - i;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(255.0 * (stops[i][0] + f * (stops[i + 1][0] - stops[i][0])) + 0.5),
                  static_cast<int>(255.0 * (stops[i][1] + f * (stops[i + 1][1] - stops[i][1])) + 0.5),
                  static_cast<int>(255.0 * (stops[i][2] + f * (stops[i + 1][2] - stops[i][2])) + 0.5));
    return buf;
}

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Block-mean downsampling in fixed order keeps the render deterministic
// and the file size bounded.
inline std::vector<std::vector<double>> downsample(const std::vector<std::vector<double>>& data,
                                                   std::size_t max_rows, std::size_t max_cols) {
    const std::size_t rows = data.size();
    const std::size_t cols = data.front().size();
    const std::size_t row_block = (rows + max_rows - 1) / max_rows;
    const std::size_t col_block = (cols + max_cols - 1) / max_cols;
    const std::size_t out_rows = (rows + row_block - 1) / row_block;
    const std::size_t out_cols = (cols + col_block - 1) / col_block;
    std::vector<std::vector<double>> out(out_rows, std::vector<double>(out_cols, 0.0));
    for (std::size_t r = 0; r < out_rows; ++r) {
        for (std::size_t c = 0; c < out_cols; ++c) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = r * row_block; i < std::min(rows, (r + 1) * row_block); ++i)
                for (std::size_t j = c * col_block; j < std::min(cols, (c + 1) * col_block); ++j) {
                    sum += data[i][j];
                    ++count;
                }
            out[r][c] = sum / static_cast<double>(count);
        }
    }
    return out;
}

}  // namespace detail

// Figure-style raster of one scan observable: time on x, the swept
// parameter on y, linear viridis scale with the min/max annotated.
// Byte-deterministic for identical input.
inline std::string render_heatmap_svg(const ScanResult& scan, const std::string& observable) {
    const auto& data = scan.observable(observable);
    if (data.empty() || scan.times.empty()) throw ShapeError("render_heatmap: empty scan");

    const auto cells = detail::downsample(data, 160, 480);
    const std::size_t rows = cells.size(), cols = cells.front().size();
    double lo = cells[0][0], hi = cells[0][0];
    for (const auto& row : cells)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double range = hi - lo;

    const int plot_w = 720, plot_h = 420, mx = 70, my = 40;
    const int width = plot_w + mx + 110, height = plot_h + 2 * my;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const double cw = static_cast<double>(plot_w) / cols;
    const double ch = static_cast<double>(plot_h) / rows;
    for (std::size_t r = 0; r < rows; ++r) {
        // Row 0 (lowest parameter) at the bottom, as in the figures.
        const double y = my + plot_h - (r + 1) * ch;
        for (std::size_t c = 0; c < cols; ++c) {
            const double u = range > 0.0 ? (cells[r][c] - lo) / range : 0.5;
            svg += "<rect x=\"" + detail::fmt6(mx + c * cw) + "\" y=\"" + detail::fmt6(y) +
                   "\" width=\"" + detail::fmt6(cw + 0.5) + "\" height=\"" +
                   detail::fmt6(ch + 0.5) + "\" fill=\"" + detail::viridis(u) + "\"/>\n";
        }
    }

    // Color bar with min/max annotations.
    const int bar_x = mx + plot_w + 20, bar_w = 18;
    for (int i = 0; i < 64; ++i) {
        const double y = my + plot_h - (i + 1) * (static_cast<double>(plot_h) / 64);
        svg += "<rect x=\"" + std::to_string(bar_x) + "\" y=\"" + detail::fmt6(y) +
               "\" width=\"" + std::to_string(bar_w) + "\" height=\"" +
               detail::fmt6(plot_h / 64.0 + 0.5) + "\" fill=\"" +
               detail::viridis((i + 0.5) / 64.0) + "\"/>\n";
    }
    auto text = [](double x, double y, const std::string& s, const std::string& anchor) {
        return "<text x=\"" + detail::fmt6(x) + "\" y=\"" + detail::fmt6(y) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" + anchor +
               "\">" + s + "</text>\n";
    };
    svg += text(bar_x + bar_w + 6, my + 10, detail::fmt6(hi), "start");
    svg += text(bar_x + bar_w + 6, my + plot_h, detail::fmt6(lo), "start");
    svg += text(mx, my + plot_h + 24, detail::fmt6(scan.times.front() * 1e9) + " ns", "start");
    svg += text(mx + plot_w, my + plot_h + 24, detail::fmt6(scan.times.back() * 1e9) + " ns",
                "end");
    svg += text(mx - 8, my + plot_h, detail::fmt6(scan.params.front()), "end");
    svg += text(mx - 8, my + 10, detail::fmt6(scan.params.back()), "end");
    svg += text(mx + plot_w / 2.0, my + plot_h + 24, "time", "middle");
    svg += text(mx - 8, my + plot_h / 2.0, scan.param_name, "end");
    svg += text(mx + plot_w / 2.0, my - 12, observable, "middle");
    svg += "</svg>\n";
    return svg;
}

inline void render_heatmap(const ScanResult& scan, const std::string& observable,
                           const std::string& path) {
    detail::write_file(path, render_heatmap_svg(scan, observable));
}

}  // namespace rydsim
