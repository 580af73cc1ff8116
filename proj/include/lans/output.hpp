#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lans/torus_isotropic.hpp"

namespace lans {

/// Column data with one unit label per column. Written as a `#` unit line,
/// one header row and rows of 17-significant-digit numbers.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

std::string format_double(double v);
std::string csv_text(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Polylines on linear or logarithmic axes with min/max tick labels.
std::string svg_text(const PlotSpec& plot);
void write_svg(const std::filesystem::path& path, const PlotSpec& plot);

/// Velocity snapshot in physical space; layout in docs/snapshot_format.md.
struct Snapshot {
    std::uint32_t dimension = 0;
    std::uint32_t n = 0;
    std::uint32_t components = 0;
    double time = 0.0;
    std::vector<double> data; // component-major, row-major per component
};

Snapshot snapshot_of(const SpectralState& state);
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

} // namespace lans
