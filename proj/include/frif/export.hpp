#pragma once

#include <array>
#include <string>
#include <vector>

#include "frif/grid.hpp"

namespace frif {

// CSV: header row, then one row per record, shortest round-trip decimal
// formatting, LF endings, deterministic byte-for-byte.
void export_csv(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows);

// 1-D grid as "x,psi" (k=1) or "x,psi_0,psi_1,psi_2,psi_3" (k=4).
void export_csv(const GridFunction& f, const std::string& path);

// Pair series as "a,b".
void export_csv(const std::vector<std::array<double, 2>>& series,
                const std::string& path);

// Single-polyline SVG, fixed 800x480 canvas, axis box and min/max labels.
void export_svg(const std::vector<std::array<double, 2>>& series,
                const std::string& path, double stroke_width = 1.0);

std::vector<std::array<double, 2>> grid_series(const GridFunction& f, int axis = 0);

std::string format_shortest(double v);

}  // namespace frif
