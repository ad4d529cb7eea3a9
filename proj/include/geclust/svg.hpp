#pragma once

#include <string>
#include <vector>

#include "geclust/attributes.hpp"

namespace geclust {

struct LineSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> std;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
};

/// Mean lines with a shaded +-1 std band per series.
std::string render_line_plot(const LinePlot& plot);

/// 2D scatter, one colour per label (-1 drawn grey).
std::string render_scatter(const RowMatrix& coords, const std::vector<int>& labels, const std::string& title = {});

/// Log-log scatter of measurements with the fitted power law overlaid.
std::string render_loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double intercept,
                              double exponent, const std::string& x_label, const std::string& y_label);

}  // namespace geclust
