#include "riesz_lake/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "riesz_lake/error.hpp"

namespace riesz_lake {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void append_row(std::string& out, const std::vector<std::string>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out += ',';
        out += quote(row[j]);
    }
    out += '\n';
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

std::string CsvTable::to_string() const {
    std::string out;
    append_row(out, header);
    for (const auto& r : rows) append_row(out, r);
    return out;
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw PreconditionError("csv: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
    const std::size_t j = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        if (j >= r.size() || r[j].empty()) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        try {
            out.push_back(std::stod(r[j]));
        } catch (const std::logic_error&) {
            throw PreconditionError("csv: column '" + name + "' has non-numeric entry '" + r[j] + "'");
        }
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (first) {
            t.header = split_line(line);
            first = false;
        } else {
            t.rows.push_back(split_line(line));
        }
    }
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::string svg_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& opts) {
    constexpr double W = 640, H = 400, ml = 70, mr = 20, mt = 40, mb = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    auto tx = [&](double v) { return opts.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!opts.log_x || x > 0) && (!opts.log_y || y > 0);
    };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable(s.x[i], s.y[i])) {
                x0 = std::min(x0, tx(s.x[i]));
                x1 = std::max(x1, tx(s.x[i]));
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) {
        const double pad = std::max(1e-12, 0.05 * std::abs(y0));
        y0 -= pad;
        y1 += pad;
    }
    auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

    std::ostringstream o;
    o.precision(6);
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << opts.title << "</text>\n";
    o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
        const double gx = ml + (W - ml - mr) * k / 4.0, gy = H - mb - (H - mt - mb) * k / 4.0;
        o << "<text x=\"" << gx << "\" y=\"" << H - mb + 16 << "\" text-anchor=\"middle\">"
          << (opts.log_x ? "1e" : "") << fx << "</text>\n";
        o << "<text x=\"" << ml - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">" << (opts.log_y ? "1e" : "")
          << fy << "</text>\n";
    }
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << opts.x_label << "</text>\n";
    o << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
      << opts.y_label << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 6];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        const auto& sr = series[s];
        for (std::size_t i = 0; i < std::min(sr.x.size(), sr.y.size()); ++i)
            if (usable(sr.x[i], sr.y[i])) o << px(sr.x[i]) << ',' << py(sr.y[i]) << ' ';
        o << "\"/>\n";
        o << "<text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 14 * s << "\" fill=\"" << color << "\">" << sr.label
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace riesz_lake
