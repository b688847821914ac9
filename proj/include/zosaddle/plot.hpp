#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace zosaddle {

struct TraceSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "oracle calls";
    std::string y_label = "duality gap";
    bool log_x = false;  // y is always log-scaled
};

namespace detail {

inline std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

inline const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

}  // namespace detail

/// Render line series into a standalone SVG file.  The y axis is log-scaled
/// with decade ticks; non-finite or non-positive y values are dropped with a
/// console warning.  Data series are the only <polyline> elements in the
/// file.
inline void render_plot(const std::vector<TraceSeries>& series, const PlotSpec& spec,
                        const std::filesystem::path& out_path) {
    if (series.empty()) throw std::invalid_argument("render_plot: no series given");

    std::vector<TraceSeries> clean;
    for (const auto& s : series) {
        TraceSeries c{s.label, {}};
        std::size_t dropped = 0;
        for (auto [x, y] : s.points) {
            bool bad = !std::isfinite(x) || !std::isfinite(y) || y <= 0.0 ||
                       (spec.log_x && x <= 0.0);
            if (bad) {
                ++dropped;
                continue;
            }
            c.points.emplace_back(x, y);
        }
        if (dropped > 0)
            std::cerr << "warning: series '" << s.label << "': dropped " << dropped
                      << " point(s) not representable on a log axis\n";
        if (!c.points.empty()) clean.push_back(std::move(c));
    }
    if (clean.empty()) throw std::invalid_argument("render_plot: no plottable points");

    double xmin = clean[0].points[0].first, xmax = xmin;
    double ymin = clean[0].points[0].second, ymax = ymin;
    for (const auto& s : clean)
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin * 10.0;

    const double W = 960, H = 600, ml = 80, mr = 210, mt = 48, mb = 60;
    const double pw = W - ml - mr, ph = H - mt - mb;
    double lx0 = spec.log_x ? std::log10(xmin) : xmin;
    double lx1 = spec.log_x ? std::log10(xmax) : xmax;
    double ly0 = std::log10(ymin), ly1 = std::log10(ymax);
    if (lx1 == lx0) lx1 = lx0 + 1;
    if (ly1 == ly0) ly1 = ly0 + 1;
    auto px = [&](double x) {
        double t = ((spec.log_x ? std::log10(x) : x) - lx0) / (lx1 - lx0);
        return ml + t * pw;
    };
    auto py = [&](double y) {
        double t = (std::log10(y) - ly0) / (ly1 - ly0);
        return mt + (1.0 - t) * ph;
    };

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("render_plot: cannot write " + out_path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        out << "<text x=\"" << ml << "\" y=\"28\" font-family=\"sans-serif\" font-size=\"17\">"
            << detail::xml_escape(spec.title) << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";

    // y decade ticks
    for (int d = static_cast<int>(std::floor(ly0)); d <= static_cast<int>(std::ceil(ly1)); ++d) {
        double y = std::pow(10.0, d);
        if (y < ymin * (1 - 1e-12) || y > ymax * (1 + 1e-12)) continue;
        double yy = py(y);
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << yy << "\" x2=\"" << ml + pw << "\" y2=\""
            << yy << "\" stroke=\"#dddddd\"/>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << yy << "\" x2=\"" << ml << "\" y2=\"" << yy
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 10 << "\" y=\"" << yy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e"
            << d << "</text>\n";
    }

    // x ticks: decades when log, five even ticks otherwise
    if (spec.log_x) {
        for (int d = static_cast<int>(std::floor(lx0)); d <= static_cast<int>(std::ceil(lx1));
             ++d) {
            double x = std::pow(10.0, d);
            if (x < xmin * (1 - 1e-12) || x > xmax * (1 + 1e-12)) continue;
            double xx = px(x);
            out << "<line x1=\"" << xx << "\" y1=\"" << mt + ph << "\" x2=\"" << xx << "\" y2=\""
                << mt + ph + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << xx << "\" y=\"" << mt + ph + 20
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << d
                << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 4; ++i) {
            double x = xmin + (xmax - xmin) * i / 4.0;
            double xx = px(x);
            out << "<line x1=\"" << xx << "\" y1=\"" << mt + ph << "\" x2=\"" << xx << "\" y2=\""
                << mt + ph + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << xx << "\" y=\"" << mt + ph + 20
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
                << detail::fmt_g(x) << "</text>\n";
        }
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << detail::xml_escape(spec.x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 "
        << mt + ph / 2 << ")\">" << detail::xml_escape(spec.y_label) << "</text>\n";

    // data
    for (std::size_t i = 0; i < clean.size(); ++i) {
        out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(i)
            << "\" stroke-width=\"1.6\" points=\"";
        for (auto [x, y] : clean[i].points) out << px(x) << "," << py(y) << " ";
        out << "\"/>\n";
    }

    // legend
    double lx = ml + pw + 14, lyy = mt + 8;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        out << "<rect x=\"" << lx << "\" y=\"" << lyy - 9 << "\" width=\"18\" height=\"4\" fill=\""
            << detail::series_color(i) << "\"/>\n";
        out << "<text x=\"" << lx + 24 << "\" y=\"" << lyy
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << detail::xml_escape(clean[i].label) << "</text>\n";
        lyy += 20;
    }
    out << "</svg>\n";
}

}  // namespace zosaddle
