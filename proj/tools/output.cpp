#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace jdrift::cli {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    out_ << "#schema=" << schema << "\n";
}

void CsvWriter::scalar(const std::string& name, const std::string& value) {
    if (header_written_) throw std::logic_error("CsvWriter: scalars must precede the header");
    out_ << "#scalar " << name << " " << value << "\n";
}

void CsvWriter::scalar(const std::string& name, double value) { scalar(name, format_double(value)); }

void CsvWriter::scalar(const std::string& name, long value) { scalar(name, std::to_string(value)); }

void CsvWriter::header(const std::vector<std::string>& columns) {
    header_written_ = true;
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

namespace {

// fixed plot geometry
constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 70, kRight = 840, kTop = 20, kBottom = 470;

double x_of(double t, double steps) { return kLeft + (kRight - kLeft) * t / steps; }
double y_of(double d, double d_top) { return kBottom - (kBottom - kTop) * d / d_top; }

std::string coord(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", v);
    return buffer;
}

}  // namespace

void write_trajectory_svg(const std::string& path, const TrajectoryBatch& batch, double d_star) {
    std::ofstream svg(path);
    if (!svg) throw std::runtime_error("cannot open output file: " + path);

    const long steps = batch.config.steps;
    double top = d_star;
    for (std::size_t i = 0; i < batch.mean_path.size(); ++i)
        top = std::max(top, batch.mean_path[i] + batch.std_path[i]);
    const double d_top = std::max(1.0, std::ceil(top) + 1.0);

    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    // axes
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kBottom << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double t = steps * tick / 5.0;
        const double x = x_of(t, steps);
        svg << "<line x1=\"" << coord(x) << "\" y1=\"" << kBottom << "\" x2=\"" << coord(x)
            << "\" y2=\"" << kBottom + 6 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << coord(x) << "\" y=\"" << kBottom + 22
            << "\" text-anchor=\"middle\" font-size=\"13\">" << long(t) << "</text>\n";
        const double d = d_top * tick / 5.0;
        const double y = y_of(d, d_top);
        svg << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << coord(y) << "\" x2=\"" << kLeft
            << "\" y2=\"" << coord(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << kLeft - 10 << "\" y=\"" << coord(y + 4)
            << "\" text-anchor=\"end\" font-size=\"13\">" << coord(d) << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-size=\"14\">t</text>\n";
    svg << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << (kTop + kBottom) / 2 << ")\">d</text>\n";

    // +-1 std band
    svg << "<polygon fill=\"#aecde8\" fill-opacity=\"0.6\" stroke=\"none\" points=\"";
    for (long t = 0; t <= steps; ++t)
        svg << coord(x_of(double(t), steps)) << ","
            << coord(y_of(std::min(d_top, batch.mean_path[t] + batch.std_path[t]), d_top)) << " ";
    for (long t = steps; t >= 0; --t)
        svg << coord(x_of(double(t), steps)) << ","
            << coord(y_of(std::max(0.0, batch.mean_path[t] - batch.std_path[t]), d_top)) << " ";
    svg << "\"/>\n";

    // equilibrium line
    const double y_star = y_of(d_star, d_top);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << coord(y_star) << "\" x2=\"" << kRight
        << "\" y2=\"" << coord(y_star)
        << "\" stroke=\"#c0392b\" stroke-dasharray=\"8 5\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << kRight - 4 << "\" y=\"" << coord(y_star - 6)
        << "\" text-anchor=\"end\" font-size=\"13\" fill=\"#c0392b\">d* = " << coord(d_star)
        << "</text>\n";

    // mean curve
    svg << "<polyline fill=\"none\" stroke=\"#2c63a8\" stroke-width=\"2\" points=\"";
    for (long t = 0; t <= steps; ++t)
        svg << coord(x_of(double(t), steps)) << "," << coord(y_of(batch.mean_path[t], d_top)) << " ";
    svg << "\"/>\n";

    svg << "</svg>\n";
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json doc;
    doc["tool"] = "jdrift";
    doc["version"] = kToolVersion;
    doc["subcommand"] = manifest.subcommand;
    doc["parameters"] = manifest.parameters;
    doc["outputs"] = manifest.outputs;

    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    doc["timestamp"] = stamp;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace jdrift::cli
