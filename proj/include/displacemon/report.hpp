#pragma once

// Output formatting: CSV tables, the JSON envelope {meta, rows|matrix}, and
// a small SVG writer for line plots, bar charts and heat maps. Every routine
// is deterministic: the same input always yields the same bytes.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace displacemon::report {

inline constexpr const char* library_version = "0.1.0";

/// %.9g, with explicit spellings for non-finite values.
inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string hex64(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

using Cell = std::variant<std::string, double, long long>;

class Table {
public:
    explicit Table(std::vector<std::string> columns)
        : columns_(std::move(columns))
    {
    }

    void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    std::string to_csv() const
    {
        std::string out;
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out += (i ? "," : "") + escape(columns_[i]);
        out += '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i)
                    out += ',';
                out += std::visit(CellText{}, row[i]);
            }
            out += '\n';
        }
        return out;
    }

    /// Array of objects keyed by column name.
    nlohmann::ordered_json to_json() const
    {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& row : rows_) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < row.size() && i < columns_.size(); ++i)
                std::visit([&](const auto& v) { obj[columns_[i]] = json_value(v); }, row[i]);
            arr.push_back(std::move(obj));
        }
        return arr;
    }

private:
    static std::string escape(const std::string& s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    static nlohmann::ordered_json json_value(const std::string& s) { return s; }
    static nlohmann::ordered_json json_value(long long v) { return v; }
    static nlohmann::ordered_json json_value(double v)
    {
        if (std::isfinite(v))
            return v;
        return format_number(v);
    }

    struct CellText {
        std::string operator()(const std::string& s) const { return escape(s); }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
    };

    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

inline nlohmann::ordered_json make_meta(const std::string& command, std::uint64_t config_hash,
                                        nlohmann::ordered_json parameters)
{
    nlohmann::ordered_json meta;
    meta["tool"] = "displacemon";
    meta["version"] = library_version;
    meta["command"] = command;
    meta["config_hash"] = hex64(config_hash);
    meta["parameters"] = std::move(parameters);
    return meta;
}

// ---------------------------------------------------------------------------
// SVG

namespace svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color;
    bool markers = false;
};

struct Axis {
    std::string label;
    bool log = false;
};

namespace detail {

inline constexpr double width = 720, height = 480;
inline constexpr double left = 80, right = 160, top = 40, bottom = 60;

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Scale {
    double lo, hi, p0, p1;
    bool log;

    double operator()(double v) const
    {
        const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return p0 + t * (p1 - p0);
    }

    static Scale fit(const std::vector<double>& values, bool log, double p0, double p1)
    {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double v : values) {
            if (!std::isfinite(v) || (log && v <= 0))
                continue;
            const double t = log ? std::log10(v) : v;
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        if (!std::isfinite(lo)) {
            lo = 0;
            hi = 1;
        }
        if (hi == lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        return {lo, hi, p0, p1, log};
    }

    std::string tick_label(double frac) const
    {
        const double t = lo + frac * (hi - lo);
        char buf[32];
        if (log)
            std::snprintf(buf, sizeof buf, "1e%.1f", t);
        else
            std::snprintf(buf, sizeof buf, "%.3g", t);
        return buf;
    }
};

inline void frame(std::ostringstream& o, const std::string& title, const Scale& sx,
                  const Scale& sy, const Axis& ax, const Axis& ay)
{
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
    const double x0 = left, x1 = width - right, y0 = height - bottom, y1 = top;
    o << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(x1 - x0)
      << "\" height=\"" << num(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double f = i / 4.0;
        const double px = x0 + f * (x1 - x0);
        const double py = y0 + f * (y1 - y0);
        o << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 16)
          << "\" text-anchor=\"middle\">" << sx.tick_label(f) << "</text>\n";
        o << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(py + 4)
          << "\" text-anchor=\"end\">" << sy.tick_label(f) << "</text>\n";
    }
    o << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(height - 16)
      << "\" text-anchor=\"middle\">" << xml_escape(ax.label) << "</text>\n";
    o << "<text transform=\"translate(18," << num((y0 + y1) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(ay.label) << "</text>\n";
}

} // namespace detail

inline std::string line_plot(const std::string& title, const Axis& ax, const Axis& ay,
                             const std::vector<Series>& series,
                             const std::vector<double>& vertical_marks = {})
{
    using namespace detail;
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const auto sx = Scale::fit(xs, ax.log, left, width - right);
    const auto sy = Scale::fit(ys, ay.log, height - bottom, top);
    std::ostringstream o;
    frame(o, title, sx, sy, ax, ay);
    for (double m : vertical_marks) {
        if (ax.log && m <= 0)
            continue;
        const double px = sx(m);
        o << "<line x1=\"" << num(px) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px)
          << "\" y2=\"" << num(height - bottom)
          << "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (ay.log && s.y[i] <= 0) || (ax.log && s.x[i] <= 0))
                continue;
            if (s.markers)
                o << "<circle cx=\"" << num(sx(s.x[i])) << "\" cy=\"" << num(sy(s.y[i]))
                  << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
            else
                pts += num(sx(s.x[i])) + "," + num(sy(s.y[i])) + " ";
        }
        if (!s.markers && !pts.empty())
            o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
              << pts << "\"/>\n";
        const double ly = top + 16 + 18 * double(k);
        o << "<rect x=\"" << num(width - right + 12) << "\" y=\"" << num(ly - 9)
          << "\" width=\"12\" height=\"12\" fill=\"" << s.color << "\"/>\n";
        o << "<text x=\"" << num(width - right + 30) << "\" y=\"" << num(ly + 1) << "\">"
          << xml_escape(s.name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// Heat map over a (possibly log-spaced) grid. values is row-major with rows
/// along y. Cells with mask set are hatched grey.
inline std::string heat_map(const std::string& title, const Axis& ax, const Axis& ay,
                            const std::vector<double>& xg, const std::vector<double>& yg,
                            const std::vector<double>& values,
                            const std::vector<std::uint8_t>& mask,
                            const std::vector<double>& vertical_marks = {})
{
    using namespace detail;
    const auto sx = Scale::fit(xg, ax.log, left, width - right);
    const auto sy = Scale::fit(yg, ay.log, height - bottom, top);
    double vmax = 0;
    for (double v : values)
        if (std::isfinite(v))
            vmax = std::max(vmax, v);
    if (vmax <= 0)
        vmax = 1;
    const double cw = (width - right - left) / double(std::max<std::size_t>(1, xg.size() - 1));
    const double ch = (height - bottom - top) / double(std::max<std::size_t>(1, yg.size() - 1));
    std::ostringstream o;
    frame(o, title, sx, sy, ax, ay);
    for (std::size_t i = 0; i < yg.size(); ++i) {
        for (std::size_t j = 0; j < xg.size(); ++j) {
            const std::size_t c = i * xg.size() + j;
            const double t = std::clamp(values[c] / vmax, 0.0, 1.0);
            const int r = int(255 * t);
            const int g = int(64 + 128 * t);
            const int b = int(255 * (1 - t));
            char fill[16];
            std::snprintf(fill, sizeof fill, "#%02x%02x%02x", r, g, b);
            o << "<rect x=\"" << num(sx(xg[j]) - cw / 2) << "\" y=\"" << num(sy(yg[i]) - ch / 2)
              << "\" width=\"" << num(cw) << "\" height=\"" << num(ch) << "\" fill=\""
              << (mask.size() > c && mask[c] ? "#9a9a9a" : fill) << "\"/>\n";
        }
    }
    for (double m : vertical_marks) {
        if (ax.log && m <= 0)
            continue;
        const double px = sx(m);
        o << "<line x1=\"" << num(px) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px)
          << "\" y2=\"" << num(height - bottom) << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
    }
    o << "<text x=\"" << num(width - right + 12) << "\" y=\"" << num(top + 16)
      << "\">max " << format_number(vmax) << "</text>\n";
    o << "<text x=\"" << num(width - right + 12) << "\" y=\"" << num(top + 34)
      << "\">grey: excluded</text>\n";
    o << "</svg>\n";
    return o.str();
}

} // namespace svg
} // namespace displacemon::report
