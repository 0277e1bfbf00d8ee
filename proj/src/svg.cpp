// This file is part of the caleval toolkit.
//
// Copyright 2026 The caleval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "caleval/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace caleval {

namespace {

constexpr double kPlotX = 70.0;
constexpr double kPlotY = 20.0;
constexpr double kPlotSize = 440.0;
constexpr double kWidth = 560.0;
constexpr double kHeight = 540.0;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string val(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

double sx(double v) { return kPlotX + kPlotSize * v; }
double sy(double v) { return kPlotY + kPlotSize * (1.0 - v); }

void rect(std::ostream& os, double x, double y, double w, double h,
          const std::string& style, const std::string& tooltip = "") {
  os << "  <rect x=\"" << px(x) << "\" y=\"" << px(y) << "\" width=\"" << px(w)
     << "\" height=\"" << px(h) << "\" " << style;
  if (tooltip.empty()) {
    os << "/>\n";
  } else {
    os << "><title>" << tooltip << "</title></rect>\n";
  }
}

void line(std::ostream& os, double x1, double y1, double x2, double y2,
          const std::string& style) {
  os << "  <line x1=\"" << px(x1) << "\" y1=\"" << px(y1) << "\" x2=\"" << px(x2)
     << "\" y2=\"" << px(y2) << "\" " << style << "/>\n";
}

}  // namespace

std::string reliability_svg(const CalibrationReport& report) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kWidth)
     << "\" height=\"" << px(kHeight) << "\" viewBox=\"0 0 " << px(kWidth) << " "
     << px(kHeight) << "\">\n";
  rect(os, 0, 0, kWidth, kHeight, "fill=\"#ffffff\"");

  // gridlines and axis tick labels at 0.2 steps
  for (int t = 0; t <= 5; ++t) {
    const double v = static_cast<double>(t) / 5.0;
    line(os, sx(v), sy(0.0), sx(v), sy(1.0), "stroke=\"#dddddd\" stroke-width=\"1\"");
    line(os, sx(0.0), sy(v), sx(1.0), sy(v), "stroke=\"#dddddd\" stroke-width=\"1\"");
    os << "  <text x=\"" << px(sx(v)) << "\" y=\"" << px(sy(0.0) + 18.0)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
          "fill=\"#333333\">"
       << px(v) << "</text>\n";
    os << "  <text x=\"" << px(sx(0.0) - 8.0) << "\" y=\"" << px(sy(v) + 4.0)
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" "
          "fill=\"#333333\">"
       << px(v) << "</text>\n";
  }

  // bars and gap shading per occupied bin
  for (size_t b = 0; b < report.per_bin.size(); ++b) {
    const ReportBin& bin = report.per_bin[b];
    if (bin.count == 0 || !bin.lo || !bin.hi || !bin.acc || !bin.conf) continue;
    double x0 = sx(std::clamp(*bin.lo, 0.0, 1.0));
    double x1 = sx(std::clamp(*bin.hi, 0.0, 1.0));
    if (x1 - x0 < 2.0) {  // zero-width equal-mass range: keep the bar visible
      const double mid = 0.5 * (x0 + x1);
      x0 = mid - 1.0;
      x1 = mid + 1.0;
    }
    const double acc = *bin.acc;
    const double conf = *bin.conf;
    std::string tooltip = "bin " + std::to_string(b) + ": n=" + std::to_string(bin.count) +
                          ", acc=" + val(acc) + ", conf=" + val(conf);
    if (acc > 0.0) {
      rect(os, x0, sy(acc), x1 - x0, sy(0.0) - sy(acc),
           "fill=\"#4878a8\" fill-opacity=\"0.85\" stroke=\"#2b4f73\" stroke-width=\"1\"",
           tooltip);
    }
    const double gap_top = std::max(acc, conf);
    const double gap_bot = std::min(acc, conf);
    if (gap_top - gap_bot > 0.0) {
      rect(os, x0, sy(gap_top), x1 - x0, sy(gap_bot) - sy(gap_top),
           "fill=\"#c44e52\" fill-opacity=\"0.45\" stroke=\"none\"", tooltip);
    }
  }

  // identity diagonal and plot frame on top of the bars
  line(os, sx(0.0), sy(0.0), sx(1.0), sy(1.0),
       "stroke=\"#888888\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"");
  rect(os, kPlotX, kPlotY, kPlotSize, kPlotSize,
       "fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"");

  os << "  <text x=\"" << px(kPlotX + kPlotSize / 2.0) << "\" y=\"" << px(kHeight - 10.0)
     << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
        "fill=\"#333333\">confidence</text>\n";
  os << "  <text x=\"18\" y=\"" << px(kPlotY + kPlotSize / 2.0)
     << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
        "fill=\"#333333\" transform=\"rotate(-90 18 "
     << px(kPlotY + kPlotSize / 2.0) << ")\">accuracy</text>\n";
  os << "  <text x=\"" << px(kPlotX + kPlotSize) << "\" y=\"" << px(kPlotY - 6.0)
     << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" "
        "fill=\"#555555\">"
     << report.scheme.describe() << ", n=" << report.n << ", " << report.metric_name
     << "=" << val(report.value) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace caleval
