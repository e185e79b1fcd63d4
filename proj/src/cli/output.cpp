#include "epscope/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace epscope {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> sweep_csv_header(std::size_t n) {
    std::vector<std::string> cols{"a"};
    for (std::size_t i = 1; i <= n; ++i) {
        const std::string s = std::to_string(i);
        cols.push_back("E_" + s);
        cols.push_back("gamma_half_" + s);
        for (std::size_t j = 1; j <= n; ++j) {
            cols.push_back("re_b_" + s + "_" + std::to_string(j));
            cols.push_back("im_b_" + s + "_" + std::to_string(j));
        }
        cols.push_back("delta_" + s);
        cols.push_back("A_" + s);
    }
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) cols.push_back("B_" + std::to_string(i) + "_" + std::to_string(j));
    return cols;
}

void write_sweep_csv(std::ostream& out, const std::vector<Trajectory>& trajectories) {
    const std::size_t n = trajectories.size();
    const auto header = sweep_csv_header(n);
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    if (n == 0) return;
    const std::size_t rows = trajectories.front().points.size();
    for (std::size_t r = 0; r < rows; ++r) {
        out << format_number(trajectories.front().points[r].a);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = trajectories[i].points[r];
            out << ',' << format_number(p.pair.energy()) << ',' << format_number(0.5 * p.pair.gamma());
            for (std::size_t j = 0; j < n; ++j)
                out << ',' << format_number(p.mixing.coefficients[j].real()) << ','
                    << format_number(p.mixing.coefficients[j].imag());
            out << ',' << format_number(p.mixing.delta) << ',' << format_number(p.A);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) out << ',' << format_number(trajectories[i].points[r].B[j]);
        out << '\n';
    }
}

const std::string& series_colour(std::size_t k) {
    static const std::array<std::string, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    return palette[k % palette.size()];
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

} // namespace

void write_svg(std::ostream& out, const std::vector<PlotPanel>& panels) {
    constexpr double width = 640, height = 300, left = 70, right = 150, top = 30, bottom = 45;
    const double total = height * static_cast<double>(panels.size());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << total
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const auto& panel = panels[pi];
        const double y0 = height * static_cast<double>(pi);
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto& s : panel.series)
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                if (!std::isfinite(s.y[k]) || !std::isfinite(s.x[k])) continue;
                xmin = std::min(xmin, s.x[k]);
                xmax = std::max(xmax, s.x[k]);
                ymin = std::min(ymin, s.y[k]);
                ymax = std::max(ymax, s.y[k]);
            }
        if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
        if (xmax == xmin) xmax = xmin + 1;
        if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;

        const double pw = width - left - right;
        const double ph = height - top - bottom;
        auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
        auto sy = [&](double y) { return y0 + top + (ymax - y) / (ymax - ymin) * ph; };

        out << "<text x=\"" << num(left) << "\" y=\"" << num(y0 + 18) << "\" font-size=\"13\">"
            << xml_escape(panel.title) << "</text>\n";
        out << "<rect x=\"" << num(left) << "\" y=\"" << num(y0 + top) << "\" width=\"" << num(pw)
            << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double xv = xmin + (xmax - xmin) * t / 4.0;
            const double yv = ymin + (ymax - ymin) * t / 4.0;
            out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(y0 + top + ph + 14)
                << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
            out << "<text x=\"" << num(left - 4) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">"
                << tick(yv) << "</text>\n";
        }
        out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(y0 + height - 8)
            << "\" text-anchor=\"middle\">" << xml_escape(panel.x_label) << "</text>\n";
        out << "<text x=\"14\" y=\"" << num(y0 + top + ph / 2) << "\" transform=\"rotate(-90 14 "
            << num(y0 + top + ph / 2) << ")\" text-anchor=\"middle\">" << xml_escape(panel.y_label) << "</text>\n";

        for (std::size_t si = 0; si < panel.series.size(); ++si) {
            const auto& s = panel.series[si];
            std::string pts;
            auto flush = [&] {
                if (pts.empty()) return;
                out << "<polyline fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1.3\""
                    << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"" << pts << "\"/>\n";
                pts.clear();
            };
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                if (!std::isfinite(s.y[k])) {
                    flush();
                    continue;
                }
                pts += num(sx(s.x[k])) + "," + num(sy(std::clamp(s.y[k], ymin, ymax))) + " ";
            }
            flush();
            const double ly = y0 + top + 12 + 14 * static_cast<double>(si);
            out << "<line x1=\"" << num(left + pw + 10) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
                << num(left + pw + 30) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.colour << "\""
                << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
            out << "<text x=\"" << num(left + pw + 34) << "\" y=\"" << num(ly) << "\">" << xml_escape(s.label)
                << "</text>\n";
        }
    }
    out << "</svg>\n";
}

} // namespace epscope
