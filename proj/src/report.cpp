#include "fastslow/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fastslow {

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(errc::io_failure, "cannot open '" + path.string() + "' for writing");
    out << body;
    if (!out)
        raise(errc::io_failure, "write failed for '" + path.string() + "'");
}

struct PlotBox {
    double x0, x1, y0, y1;         // data ranges (log10 space for rate plots)
    double px0 = 70, px1 = 590;    // canvas region
    double py0 = 420, py1 = 40;

    double px(double x) const { return px0 + (x - x0) / (x1 - x0) * (px1 - px0); }
    double py(double y) const { return py0 + (y - y0) / (y1 - y0) * (py1 - py0); }
};

} // namespace

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

std::string format_csv(const CsvTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit([&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) out << format_sci(v);
                else out << v;
            }, row[i]);
        }
        out << '\n';
    }
    return out.str();
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
    write_file(path, format_csv(table));
}

bool format_rate_svg(const RateFit& fit, const std::string& title, std::string& out) {
    if (fit.points.size() < 2) return false;

    double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
    for (const auto& [x, y] : fit.points) {
        lx_min = std::min(lx_min, std::log10(x));
        lx_max = std::max(lx_max, std::log10(x));
        ly_min = std::min(ly_min, std::log10(y));
        ly_max = std::max(ly_max, std::log10(y));
    }
    const double pad_x = 0.05 * std::max(lx_max - lx_min, 1e-6);
    const double pad_y = 0.05 * std::max(ly_max - ly_min, 1e-6);
    PlotBox box{lx_min - pad_x, lx_max + pad_x, ly_min - pad_y, ly_max + pad_y};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg << "<rect x=\"70\" y=\"40\" width=\"520\" height=\"380\" fill=\"none\" "
           "stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    svg << "<text x=\"320\" y=\"460\" text-anchor=\"middle\" font-size=\"13\">log10 eps</text>\n";
    svg << "<text x=\"20\" y=\"230\" text-anchor=\"middle\" font-size=\"13\" "
           "transform=\"rotate(-90 20 230)\">log10 value</text>\n";

    // fitted line across the data range (natural-log fit converted to log10)
    const double ln10 = std::log(10.0);
    const auto fit_ly = [&](double lx) {
        return (fit.intercept + fit.slope * lx * ln10) / ln10;
    };
    svg << "<line x1=\"" << box.px(lx_min) << "\" y1=\"" << box.py(fit_ly(lx_min))
        << "\" x2=\"" << box.px(lx_max) << "\" y2=\"" << box.py(fit_ly(lx_max))
        << "\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";

    for (const auto& [x, y] : fit.points)
        svg << "<circle cx=\"" << box.px(std::log10(x)) << "\" cy=\""
            << box.py(std::log10(y)) << "\" r=\"4\" fill=\"crimson\"/>\n";

    char slope_txt[48];
    std::snprintf(slope_txt, sizeof slope_txt, "slope≈%.1f", fit.slope);
    svg << "<text x=\"90\" y=\"64\" font-size=\"14\">" << slope_txt << "</text>\n";
    svg << "</svg>\n";
    out = svg.str();
    return true;
}

bool emit_rate_svg(const RateFit& fit, const std::string& title,
                   const std::filesystem::path& path) {
    std::string body;
    if (!format_rate_svg(fit, title, body)) {
        std::fprintf(stderr, "warning: fewer than 2 points, skipping plot '%s'\n",
                     path.string().c_str());
        return false;
    }
    write_file(path, body);
    return true;
}

std::string format_manifold_svg(double sigma_slow, double sigma_critical,
                                double beta, double eps) {
    // draw v = sigma/(2 beta) u over u in [-1, 1], both lines through origin
    const double slope_s = sigma_slow / (2.0 * beta);
    const double slope_c = sigma_critical / (2.0 * beta);
    const double vmax = std::max({std::abs(slope_s), std::abs(slope_c), 1e-12});
    PlotBox box{-1.0, 1.0, -vmax, vmax};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg << "<rect x=\"70\" y=\"40\" width=\"520\" height=\"380\" fill=\"none\" "
           "stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
           "slow and critical lines in the (u, v) plane</text>\n";
    svg << "<line x1=\"" << box.px(-1.0) << "\" y1=\"" << box.py(-slope_s)
        << "\" x2=\"" << box.px(1.0) << "\" y2=\"" << box.py(slope_s)
        << "\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n";
    svg << "<line x1=\"" << box.px(-1.0) << "\" y1=\"" << box.py(-slope_c)
        << "\" x2=\"" << box.px(1.0) << "\" y2=\"" << box.py(slope_c)
        << "\" stroke=\"steelblue\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>\n";
    char note[64];
    std::snprintf(note, sizeof note, "eps=%g", eps);
    svg << "<text x=\"90\" y=\"64\" font-size=\"14\">" << note << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_manifold_svg(double sigma_slow, double sigma_critical, double beta,
                       double eps, const std::filesystem::path& path) {
    write_file(path, format_manifold_svg(sigma_slow, sigma_critical, beta, eps));
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_run_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["tool"] = m.tool;
    j["version"] = m.version;
    j["timestamp"] = m.timestamp;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    auto files = nlohmann::ordered_json::array();
    for (const auto& f : m.files)
        files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"checksum", f.checksum}});
    j["files"] = std::move(files);
    if (!m.summary_json.empty())
        j["summary"] = nlohmann::ordered_json::parse(m.summary_json);
    write_file(path, j.dump(2) + "\n");
}

} // namespace fastslow
