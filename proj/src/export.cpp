#include "frif/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace frif {

std::string format_shortest(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

void export_csv(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_shortest(row[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

void export_csv(const GridFunction& f, const std::string& path) {
    if (f.dim() != 1) throw IoError("grid CSV export needs a 1-D domain");
    std::vector<std::string> header{"x"};
    if (f.value_dim == 1) {
        header.push_back("psi");
    } else {
        for (int k = 0; k < f.value_dim; ++k)
            header.push_back("psi_" + std::to_string(k));
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(f.node_count());
    std::vector<double> x(1);
    for (long long i = 0; i < f.node_count(); ++i) {
        f.node_point(i, x);
        std::vector<double> row{x[0]};
        for (int k = 0; k < f.value_dim; ++k)
            row.push_back(f.values[i * f.value_dim + k]);
        rows.push_back(std::move(row));
    }
    export_csv(path, header, rows);
}

void export_csv(const std::vector<std::array<double, 2>>& series,
                const std::string& path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(series.size());
    for (const auto& p : series) rows.push_back({p[0], p[1]});
    export_csv(path, {"a", "b"}, rows);
}

std::vector<std::array<double, 2>> grid_series(const GridFunction& f, int axis) {
    if (f.dim() != 1) throw IoError("series export needs a 1-D domain");
    std::vector<std::array<double, 2>> out;
    out.reserve(f.node_count());
    std::vector<double> x(1);
    for (long long i = 0; i < f.node_count(); ++i) {
        f.node_point(i, x);
        out.push_back({x[0], f.values[i * f.value_dim + axis]});
    }
    return out;
}

void export_svg(const std::vector<std::array<double, 2>>& series,
                const std::string& path, double stroke_width) {
    if (series.empty()) throw IoError("refusing to write an SVG for an empty series");
    const double width = 800, height = 480, margin = 50;

    double xmin = series[0][0], xmax = series[0][0];
    double ymin = series[0][1], ymax = series[0][1];
    for (const auto& p : series) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    double xspan = xmax - xmin, yspan = ymax - ymin;
    if (xspan == 0.0) xspan = 1.0;
    if (yspan == 0.0) yspan = 1.0;

    auto sx = [&](double x) { return margin + (x - xmin) / xspan * (width - 2 * margin); };
    auto sy = [&](double y) { return height - margin - (y - ymin) / yspan * (height - 2 * margin); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "width=\"800\" height=\"480\" viewBox=\"0 0 800 480\">\n";
    out << "<rect x=\"" << format_shortest(margin) << "\" y=\"" << format_shortest(margin)
        << "\" width=\"" << format_shortest(width - 2 * margin) << "\" height=\""
        << format_shortest(height - 2 * margin)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\""
        << format_shortest(stroke_width) << "\" points=\"";
    for (size_t i = 0; i < series.size(); ++i) {
        if (i) out << ' ';
        out << format_shortest(sx(series[i][0])) << ',' << format_shortest(sy(series[i][1]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << format_shortest(margin) << "\" y=\"470\" font-size=\"12\">"
        << format_shortest(xmin) << "</text>\n";
    out << "<text x=\"" << format_shortest(width - margin) << "\" y=\"470\" "
           "font-size=\"12\" text-anchor=\"end\">" << format_shortest(xmax) << "</text>\n";
    out << "<text x=\"8\" y=\"" << format_shortest(height - margin)
        << "\" font-size=\"12\">" << format_shortest(ymin) << "</text>\n";
    out << "<text x=\"8\" y=\"" << format_shortest(margin + 12) << "\" font-size=\"12\">"
        << format_shortest(ymax) << "</text>\n";
    out << "</svg>\n";
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace frif
