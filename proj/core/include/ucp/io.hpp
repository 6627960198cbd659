#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ucp {

/// Numeric table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a header column, if present.
    std::optional<std::size_t> column(const std::string& name) const;
    bool operator==(const CsvTable&) const = default;
};

struct CsvWarning {
    std::size_t line;  // 1-based line in the input
    std::string message;
};

/// Reads a comma-separated numeric table. The first non-blank, non-# line is the
/// header. Rows with the wrong number of fields or non-numeric fields are skipped
/// and reported in `warnings`. Throws DataError when there is no header at all.
CsvTable read_csv(std::istream& in, std::vector<CsvWarning>* warnings = nullptr);
CsvTable read_csv_file(const std::filesystem::path& path, std::vector<CsvWarning>* warnings = nullptr);

/// Writes numbers in shortest round-trip form, so read_csv restores them exactly.
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

/// Line plot with a single polyline and an optional vertical marker.
struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
    std::optional<double> marker_x;
    std::string marker_label;
    double width = 640;
    double height = 420;
};

/// Self-contained SVG document. Throws DataError for mismatched or empty series.
std::string render_svg(const SvgPlot& plot);

/// Writes text, creating parent directories. Throws ConfigError when the file cannot be opened.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ucp
