#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace riesz_lake {

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Shortest round-trip formatting ("%.17g"); nan and inf are spelled out.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
    // Column index by name; throws PreconditionError when absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

// Static SVG line chart. Non-finite points, and nonpositive ones on log axes, are skipped.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& opts);

}  // namespace riesz_lake
