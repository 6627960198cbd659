#include "ucp/io.hpp"

#include "ucp/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ucp {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_number(const std::string& field) {
    if (field.empty()) return std::nullopt;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// 2 decimals is plenty for pixel coordinates
std::string px(double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << v;
    return s.str();
}

std::string tick_label(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

}  // namespace

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& in, std::vector<CsvWarning>* warnings) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    auto warn = [&](std::string msg) {
        if (warnings) warnings->push_back({line_no, std::move(msg)});
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string clean = trim(line);
        if (clean.empty() || clean.front() == '#') continue;
        auto fields = split(clean);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            warn("expected " + std::to_string(table.header.size()) + " fields, found " +
                 std::to_string(fields.size()));
            continue;
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto v = parse_number(fields[i]);
            if (!v) {
                warn("column '" + table.header[i] + "' is not a number: '" + fields[i] + "'");
                break;
            }
            row.push_back(*v);
        }
        if (row.size() == fields.size()) table.rows.push_back(std::move(row));
    }
    if (!have_header) throw DataError("CSV input is empty");
    return table;
}

CsvTable read_csv_file(const std::filesystem::path& path, std::vector<CsvWarning>* warnings) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_csv(in, warnings);
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const CsvTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) {
    std::ostringstream s;
    write_csv(s, table);
    write_text_file(path, s.str());
}

std::string render_svg(const SvgPlot& plot) {
    if (plot.x.empty() || plot.x.size() != plot.y.size()) throw DataError("plot series are empty or mismatched");
    const double left = 80;
    const double right = 20;
    const double top = 40;
    const double bottom = 60;
    const double w = plot.width - left - right;
    const double h = plot.height - top - bottom;

    auto [xmin_it, xmax_it] = std::minmax_element(plot.x.begin(), plot.x.end());
    auto [ymin_it, ymax_it] = std::minmax_element(plot.y.begin(), plot.y.end());
    double x0 = *xmin_it;
    double x1 = *xmax_it;
    if (plot.marker_x) {
        x0 = std::min(x0, *plot.marker_x);
        x1 = std::max(x1, *plot.marker_x);
    }
    double y0 = std::min(0.0, *ymin_it);
    double y1 = *ymax_it;
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    y1 += 0.05 * (y1 - y0);
    auto sx = [&](double v) { return left + (v - x0) / (x1 - x0) * w; };
    auto sy = [&](double v) { return top + h - (v - y0) / (y1 - y0) * h; };

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(plot.width) << "\" height=\""
      << px(plot.height) << "\" viewBox=\"0 0 " << px(plot.width) << ' ' << px(plot.height) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << px(plot.width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << escape_xml(plot.title) << "</text>\n"
      << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << px(left) << "\" y1=\"" << px(top + h) << "\" x2=\"" << px(left + w) << "\" y2=\""
      << px(top + h) << "\"/>\n"
      << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left) << "\" y2=\"" << px(top + h)
      << "\"/>\n</g>\n"
      << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        s << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(top + h + 16) << "\" text-anchor=\"middle\">"
          << tick_label(xv) << "</text>\n"
          << "<text x=\"" << px(left - 6) << "\" y=\"" << px(sy(yv) + 4) << "\" text-anchor=\"end\">"
          << tick_label(yv) << "</text>\n";
    }
    s << "<text x=\"" << px(left + w / 2) << "\" y=\"" << px(plot.height - 14) << "\" text-anchor=\"middle\">"
      << escape_xml(plot.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << px(top + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << px(top + h / 2) << ")\">" << escape_xml(plot.y_label) << "</text>\n</g>\n";

    s << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < plot.x.size(); ++i) {
        s << (i ? " " : "") << px(sx(plot.x[i])) << ',' << px(sy(plot.y[i]));
    }
    s << "\"/>\n";
    if (plot.marker_x) {
        const double mx = sx(*plot.marker_x);
        s << "<line x1=\"" << px(mx) << "\" y1=\"" << px(top) << "\" x2=\"" << px(mx) << "\" y2=\"" << px(top + h)
          << "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\"/>\n"
          << "<text x=\"" << px(mx + 4) << "\" y=\"" << px(top + 14)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#c0392b\">" << escape_xml(plot.marker_label)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace ucp
