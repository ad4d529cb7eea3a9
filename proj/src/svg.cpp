#include "geclust/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace geclust {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 55;

const char* palette(int i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                 "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  return colors[static_cast<std::size_t>(i) % 10];
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
}

std::string header(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
  return s;
}

std::string axes(const Frame& f, const std::string& xl, const std::string& yl, bool log_x = false, bool log_y = false) {
  std::string s;
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) +
       "\" height=\"" + num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
    s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(kHeight - kBottom + 16) + "\" text-anchor=\"middle\">" +
         tick(log_x ? std::pow(10.0, xv) : xv) + "</text>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(f.py(yv) + 4) + "\" text-anchor=\"end\">" +
         tick(log_y ? std::pow(10.0, yv) : yv) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + (kWidth - kLeft - kRight) / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" text-anchor=\"middle\">" + escape(xl) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(kTop + (kHeight - kTop - kBottom) / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num(kTop + (kHeight - kTop - kBottom) / 2) + ")\">" +
       escape(yl) + "</text>\n";
  return s;
}

}  // namespace

std::string render_line_plot(const LinePlot& plot) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = 0.0, y1 = 1.0;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.mean[i] - s.std[i]);
      y1 = std::max(y1, s.mean[i] + s.std[i]);
    }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0;
  widen(x0, x1);
  const Frame f{x0, x1, y0, y1};
  std::string out = header(plot.title) + axes(f, plot.x_label, plot.y_label);
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    if (s.x.empty()) continue;
    std::string band, line;
    for (std::size_t i = 0; i < s.x.size(); ++i) band += num(f.px(s.x[i])) + "," + num(f.py(s.mean[i] + s.std[i])) + " ";
    for (std::size_t i = s.x.size(); i-- > 0;) band += num(f.px(s.x[i])) + "," + num(f.py(s.mean[i] - s.std[i])) + " ";
    for (std::size_t i = 0; i < s.x.size(); ++i) line += num(f.px(s.x[i])) + "," + num(f.py(s.mean[i])) + " ";
    const char* c = palette(static_cast<int>(k));
    out += std::string("<polygon points=\"") + band + "\" fill=\"" + c + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    out += std::string("<polyline points=\"") + line + "\" fill=\"none\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    out += std::string("<line x1=\"") + num(kWidth - kRight + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(kWidth - kRight + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + c + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(kWidth - kRight + 38) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.name) + "</text>\n";
  }
  return out + "</svg>\n";
}

std::string render_scatter(const RowMatrix& coords, const std::vector<int>& labels, const std::string& title) {
  double x0 = coords.rows() ? coords.col(0).minCoeff() : 0.0, x1 = coords.rows() ? coords.col(0).maxCoeff() : 1.0;
  double y0 = coords.rows() ? coords.col(1).minCoeff() : 0.0, y1 = coords.rows() ? coords.col(1).maxCoeff() : 1.0;
  widen(x0, x1);
  widen(y0, y1);
  const Frame f{x0, x1, y0, y1};
  std::string out = header(title) + axes(f, "x", "y");
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    const int l = static_cast<std::size_t>(i) < labels.size() ? labels[static_cast<std::size_t>(i)] : -1;
    out += "<circle cx=\"" + num(f.px(coords(i, 0))) + "\" cy=\"" + num(f.py(coords(i, 1))) + "\" r=\"3\" fill=\"" +
           (l < 0 ? std::string("#bbbbbb") : std::string(palette(l))) + "\"/>\n";
  }
  return out + "</svg>\n";
}

std::string render_loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double intercept,
                              double exponent, const std::string& x_label, const std::string& y_label) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log10(x[i]));
    ly.push_back(std::log10(y[i]));
  }
  double x0 = lx.empty() ? 0.0 : *std::min_element(lx.begin(), lx.end());
  double x1 = lx.empty() ? 1.0 : *std::max_element(lx.begin(), lx.end());
  double y0 = ly.empty() ? 0.0 : *std::min_element(ly.begin(), ly.end());
  double y1 = ly.empty() ? 1.0 : *std::max_element(ly.begin(), ly.end());
  widen(x0, x1);
  widen(y0, y1);
  const Frame f{x0, x1, y0, y1};
  std::string out = header("fitted exponent " + tick(exponent)) + axes(f, x_label, y_label, true, true);
  for (std::size_t i = 0; i < lx.size(); ++i)
    out += "<circle cx=\"" + num(f.px(lx[i])) + "\" cy=\"" + num(f.py(ly[i])) + "\" r=\"4\" fill=\"#ff3b3b\"/>\n";
  // Fit in natural logs: ln y = a + b ln x  ->  log10 y = a / ln 10 + b log10 x.
  auto fit = [&](double l10x) { return intercept / std::log(10.0) + exponent * l10x; };
  out += "<line x1=\"" + num(f.px(x0)) + "\" y1=\"" + num(f.py(fit(x0))) + "\" x2=\"" + num(f.px(x1)) + "\" y2=\"" +
         num(f.py(fit(x1))) + "\" stroke=\"#8b0000\" stroke-width=\"2\"/>\n";
  return out + "</svg>\n";
}

}  // namespace geclust
