#include "rwbandit/plot.hpp"

#include "rwbandit/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace rwb {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double to_number(const std::string& s)
{
    if (s.empty())
        return std::nan("");
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        return used == s.size() ? v : std::nan("");
    } catch (const std::exception&) {
        return std::nan("");
    }
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string xml_escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace

CsvTable parse_csv(const std::string& text)
{
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("empty CSV");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    table.header = split(line);
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto cells = split(line);
        for (std::size_t c = 0; c < table.header.size(); ++c)
            table.columns[c].push_back(c < cells.size() ? to_number(cells[c]) : std::nan(""));
    }
    return table;
}

std::string render_svg(const CsvTable& table, const std::string& title, int width, int height)
{
    if (table.columns.size() < 2 || table.columns[0].empty())
        throw ConfigError("plot needs an x column and at least one series");
    const auto& xs = table.columns[0];
    const std::size_t n = xs.size();

    struct Series {
        std::string name;
        std::size_t mean;
        std::optional<std::size_t> stddev;
    };
    std::vector<Series> series;
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const std::string& h = table.header[c];
        if (ends_with(h, "_std"))
            continue;
        Series s{h, c, std::nullopt};
        if (ends_with(h, "_mean")) {
            const std::string base = h.substr(0, h.size() - 5);
            s.name = base;
            for (std::size_t d = 1; d < table.header.size(); ++d)
                if (table.header[d] == base + "_std")
                    s.stddev = d;
        }
        series.push_back(s);
    }

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(xs[i]))
            continue;
        xmin = std::min(xmin, xs[i]);
        xmax = std::max(xmax, xs[i]);
        for (const auto& s : series) {
            const double m = table.columns[s.mean][i];
            if (!std::isfinite(m))
                continue;
            const double sd = s.stddev ? table.columns[*s.stddev][i] : 0.0;
            const double band = std::isfinite(sd) ? sd : 0.0;
            ymin = std::min(ymin, m - band);
            ymax = std::max(ymax, m + band);
        }
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin))
        throw ConfigError("plot found no finite data");
    if (xmax == xmin)
        xmax = xmin + 1.0;
    if (ymax == ymin)
        ymax = ymin + 1.0;

    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };
    const std::size_t stride = std::max<std::size_t>(1, n / 1000);

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        width, height, width, height, width / 2, xml_escape(title));
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n", left,
                       top, pw, ph);
    for (int k = 0; k <= 4; ++k) {
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"end\">{:.4g}</text>\n",
                           left - 6, py(yv) + 4, yv);
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"middle\">{:.4g}</text>\n",
                           px(xv), top + ph + 18, xv);
    }
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                       "text-anchor=\"middle\">{}</text>\n",
                       left + pw / 2, height - 10, table.header[0]);

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* colour = kPalette[si % std::size(kPalette)];
        if (s.stddev) {
            std::string upper, lower;
            for (std::size_t i = 0; i < n; i += stride) {
                const double m = table.columns[s.mean][i], sd = table.columns[*s.stddev][i];
                if (!std::isfinite(xs[i]) || !std::isfinite(m) || !std::isfinite(sd))
                    continue;
                upper += fmt::format("{:.2f},{:.2f} ", px(xs[i]), py(m + sd));
                lower.insert(0, fmt::format("{:.2f},{:.2f} ", px(xs[i]), py(m - sd)));
            }
            svg += fmt::format("<polygon points=\"{}{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n", upper,
                               lower, colour);
        }
        std::string pts;
        for (std::size_t i = 0; i < n; i += stride) {
            const double m = table.columns[s.mean][i];
            if (std::isfinite(xs[i]) && std::isfinite(m))
                pts += fmt::format("{:.2f},{:.2f} ", px(xs[i]), py(m));
        }
        svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", pts, colour);
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\" "
                           "fill=\"{}\">{}</text>\n",
                           left + 10, top + 16 + 16.0 * si, colour, xml_escape(s.name));
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace rwb
