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

#pragma once

#include <string>
#include <vector>

namespace coillink {

struct ChartSeries {
  std::string label;
  std::vector<double> y;
};

/// Minimal SVG 1.1 polyline chart: axes, min/max tick labels, one polyline
/// per series, legend. Long series are decimated to roughly 2000 points.
/// Purely presentational output; never consumed numerically.
std::string render_svg_chart(const std::string& title, const std::string& x_label,
                             const std::vector<double>& x,
                             const std::vector<ChartSeries>& series);

}  // namespace coillink
