// Copyright 2026 The coil-link Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coillink/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace coillink {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 600;
constexpr int kMarginLeft = 80;
constexpr int kMarginRight = 40;
constexpr int kMarginTop = 50;
constexpr int kMarginBottom = 60;
constexpr size_t kMaxPoints = 2000;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg_chart(const std::string& title, const std::string& x_label,
                             const std::vector<double>& x,
                             const std::vector<ChartSeries>& series) {
  if (x.size() < 2) throw std::invalid_argument("svg chart needs at least 2 points");
  if (series.empty()) throw std::invalid_argument("svg chart needs at least one series");
  for (const auto& s : series) {
    if (s.y.size() != x.size()) {
      throw std::invalid_argument("svg series length differs from x axis");
    }
  }

  double x_min = x.front();
  double x_max = x.front();
  for (double v : x) {
    x_min = std::min(x_min, v);
    x_max = std::max(x_max, v);
  }
  double y_min = series[0].y[0];
  double y_max = y_min;
  for (const auto& s : series) {
    for (double v : s.y) {
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) {
    y_max += 0.5;
    y_min -= 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double v) {
    return kMarginLeft + (v - x_min) / (x_max - x_min) * plot_w;
  };
  const auto py = [&](double v) {
    return kMarginTop + (y_max - v) / (y_max - y_min) * plot_h;
  };

  const size_t stride = std::max<size_t>(1, x.size() / kMaxPoints);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth
      << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"18\">"
      << escape(title) << "</text>\n";

  // Axes.
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
      << kMarginLeft << "\" y2=\"" << kHeight - kMarginBottom
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom
      << "\" x2=\"" << kWidth - kMarginRight << "\" y2=\""
      << kHeight - kMarginBottom << "\" stroke=\"black\"/>\n";

  svg << "<text x=\"" << kMarginLeft << "\" y=\"" << kHeight - kMarginBottom + 20
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << num(x_min)
      << "</text>\n";
  svg << "<text x=\"" << kWidth - kMarginRight
      << "\" y=\"" << kHeight - kMarginBottom + 20
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << num(x_max) << "</text>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(x_label) << "</text>\n";
  svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << kHeight - kMarginBottom
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << num(y_min + y_pad) << "</text>\n";
  svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << kMarginTop + 10
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << num(y_max - y_pad) << "</text>\n";

  // Zero line when the range straddles it.
  if (y_min < 0.0 && y_max > 0.0) {
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(py(0.0)) << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << num(py(0.0))
        << "\" stroke=\"#cccccc\" stroke-dasharray=\"4,4\"/>\n";
  }

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < x.size(); i += stride) {
      svg << num(px(x[i])) << ',' << num(py(series[s].y[i])) << ' ';
    }
    if ((x.size() - 1) % stride != 0) {
      svg << num(px(x.back())) << ',' << num(py(series[s].y.back()));
    }
    svg << "\"/>\n";
    const int ly = kMarginTop + 16 + static_cast<int>(s) * 18;
    svg << "<line x1=\"" << kWidth - kMarginRight - 160 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << kWidth - kMarginRight - 136 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
    svg << "<text x=\"" << kWidth - kMarginRight - 130 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[s].label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace coillink
