#include "stnkey/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace stnkey {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  const double margin_l = 64, margin_r = 16, margin_t = 36, margin_b = 48;
  const double plot_w = spec.width - margin_l - margin_r;
  const double plot_h = spec.height - margin_t - margin_b;

  // Transform and collect finite points per series.
  std::vector<std::vector<std::pair<double, double>>> data(series.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (auto [x, y] : series[s].points) {
      if (spec.log_x) {
        if (!(x > 0.0)) {
          data[s].emplace_back(std::nan(""), std::nan(""));
          continue;
        }
        x = std::log10(x);
      }
      if (spec.log_y) {
        if (!(y > 0.0)) {
          data[s].emplace_back(std::nan(""), std::nan(""));
          continue;
        }
        y = std::log10(y);
      }
      if (!std::isfinite(x) || !std::isfinite(y)) {
        data[s].emplace_back(std::nan(""), std::nan(""));
        continue;
      }
      data[s].emplace_back(x, y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) {  // no drawable points
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;

  const auto sx = [&](double x) { return margin_l + (x - xmin) / (xmax - xmin) * plot_w; };
  const auto sy = [&](double y) {
    return margin_t + plot_h - (y - ymin) / (ymax - ymin) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(spec.width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">" + spec.title + "</text>\n";

  // axes
  out += "<line x1=\"" + num(margin_l) + "\" y1=\"" + num(margin_t) + "\" x2=\"" +
         num(margin_l) + "\" y2=\"" + num(margin_t + plot_h) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + num(margin_l) + "\" y1=\"" + num(margin_t + plot_h) + "\" x2=\"" +
         num(margin_l + plot_w) + "\" y2=\"" + num(margin_t + plot_h) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // ticks
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    out += "<line x1=\"" + num(sx(fx)) + "\" y1=\"" + num(margin_t + plot_h) + "\" x2=\"" +
           num(sx(fx)) + "\" y2=\"" + num(margin_t + plot_h + 4) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(margin_t + plot_h + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(fx) + "</text>\n";
    out += "<line x1=\"" + num(margin_l - 4) + "\" y1=\"" + num(sy(fy)) + "\" x2=\"" +
           num(margin_l) + "\" y2=\"" + num(sy(fy)) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(margin_l - 8) + "\" y=\"" + num(sy(fy) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           tick_label(fy) + "</text>\n";
  }

  // axis labels
  out += "<text x=\"" + num(margin_l + plot_w / 2) + "\" y=\"" + num(spec.height - 10.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         spec.x_label + "</text>\n";
  out += "<text x=\"14\" y=\"" + num(margin_t + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 14 " + num(margin_t + plot_h / 2) + ")\">" +
         spec.y_label + "</text>\n";

  // series
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    const auto flush = [&]() {
      if (!points.empty()) {
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        points.clear();
      }
    };
    for (auto [x, y] : data[s]) {
      if (std::isnan(x) || std::isnan(y)) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += num(sx(x)) + "," + num(sy(y));
    }
    flush();
    // legend entry
    const double ly = margin_t + 14.0 * static_cast<double>(s) + 8;
    out += "<line x1=\"" + num(margin_l + plot_w - 110) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(margin_l + plot_w - 90) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(margin_l + plot_w - 84) + "\" y=\"" + num(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + series[s].label + "</text>\n";
  }

  out += "</svg>\n";
  return out;
}

}  // namespace stnkey
