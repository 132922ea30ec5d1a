#ifndef SEQIHR_TOOLS_SVG_HPP
#define SEQIHR_TOOLS_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "seqihr/errors.hpp"

namespace seqihr::tools {

/// Minimal self-rendered vector plot: axes, tick labels and polylines.
/// CSV stays the canonical output; this is for quick visual checks only.
class SvgPlot {
  public:
    SvgPlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::string& color, const std::string& label) {
        series_.push_back({xs, ys, color, label});
    }

    void write(const std::string& path) const {
        const double w = 900, h = 540;
        const double ml = 70, mr = 20, mt = 40, mb = 50;

        double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
        bool first = true;
        for (const auto& s : series_) {
            for (std::size_t k = 0; k < s.xs.size() && k < s.ys.size(); ++k) {
                if (first) {
                    x_min = x_max = s.xs[k];
                    y_min = y_max = s.ys[k];
                    first = false;
                }
                x_min = std::min(x_min, s.xs[k]);
                x_max = std::max(x_max, s.xs[k]);
                y_min = std::min(y_min, s.ys[k]);
                y_max = std::max(y_max, s.ys[k]);
            }
        }
        if (x_max == x_min)
            x_max = x_min + 1;
        if (y_max == y_min)
            y_max = y_min + 1;
        y_min = std::min(y_min, 0.0);

        auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr); };
        auto py = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb); };

        std::string out;
        char buf[512];
        std::snprintf(buf, sizeof(buf),
                      "<svg xmlns='http://www.w3.org/2000/svg' width='%g' height='%g' "
                      "viewBox='0 0 %g %g'>\n<rect width='%g' height='%g' fill='white'/>\n",
                      w, h, w, h, w, h);
        out += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x='%g' y='24' font-family='sans-serif' font-size='16' "
                      "text-anchor='middle'>%s</text>\n",
                      w / 2, title_.c_str());
        out += buf;

        // axes
        std::snprintf(buf, sizeof(buf),
                      "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n"
                      "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n",
                      ml, h - mb, w - mr, h - mb, ml, mt, ml, h - mb);
        out += buf;

        for (int k = 0; k <= 5; ++k) {
            const double xv = x_min + (x_max - x_min) * k / 5.0;
            const double yv = y_min + (y_max - y_min) * k / 5.0;
            std::snprintf(buf, sizeof(buf),
                          "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n"
                          "<text x='%g' y='%g' font-family='sans-serif' font-size='11' "
                          "text-anchor='middle'>%.4g</text>\n",
                          px(xv), h - mb, px(xv), h - mb + 5, px(xv), h - mb + 18, xv);
            out += buf;
            std::snprintf(buf, sizeof(buf),
                          "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n"
                          "<text x='%g' y='%g' font-family='sans-serif' font-size='11' "
                          "text-anchor='end'>%.4g</text>\n",
                          ml - 5, py(yv), ml, py(yv), ml - 8, py(yv) + 4, yv);
            out += buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<text x='%g' y='%g' font-family='sans-serif' font-size='13' "
                      "text-anchor='middle'>%s</text>\n",
                      w / 2, h - 10, x_label_.c_str());
        out += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x='16' y='%g' font-family='sans-serif' font-size='13' "
                      "text-anchor='middle' transform='rotate(-90 16 %g)'>%s</text>\n",
                      (mt + h - mb) / 2, (mt + h - mb) / 2, y_label_.c_str());
        out += buf;

        double legend_y = mt + 8;
        for (const auto& s : series_) {
            out += "<polyline fill='none' stroke='" + s.color + "' stroke-width='1.5' points='";
            for (std::size_t k = 0; k < s.xs.size() && k < s.ys.size(); ++k) {
                std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(s.xs[k]), py(s.ys[k]));
                out += buf;
            }
            out += "'/>\n";
            std::snprintf(buf, sizeof(buf),
                          "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='%s' stroke-width='2'/>"
                          "<text x='%g' y='%g' font-family='sans-serif' font-size='12'>%s</text>\n",
                          w - mr - 190.0, legend_y, w - mr - 160.0, legend_y, s.color.c_str(),
                          w - mr - 152.0, legend_y + 4, s.label.c_str());
            out += buf;
            legend_y += 18;
        }
        out += "</svg>\n";

        std::ofstream file(path);
        if (!file)
            throw DataError("cannot write plot: " + path);
        file << out;
    }

  private:
    struct Series {
        std::vector<double> xs, ys;
        std::string color, label;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

} // namespace seqihr::tools

#endif
