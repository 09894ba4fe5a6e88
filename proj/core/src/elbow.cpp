// Copyright 2026 The kvote Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kvote/elbow.hpp"

#include <cmath>
#include <limits>

#include "kvote/error.hpp"

namespace kvote {

void MetricCurve::validate() const {
  if (k_values.size() != scores.size())
    throw ValidationError("MetricCurve: k_values and scores lengths differ");
  for (std::size_t i = 1; i < k_values.size(); ++i)
    if (k_values[i] <= k_values[i - 1])
      throw ValidationError("MetricCurve: k_values must be strictly increasing");
  for (double s : scores)
    if (!std::isfinite(s)) throw ValidationError("MetricCurve: non-finite score");
}

namespace {

double sse_of_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                       std::size_t lo, std::size_t hi) {
  // Least-squares line over points [lo, hi], returned as residual SSE.
  const double m = static_cast<double>(hi - lo + 1);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double vxx = sxx - sx * sx / m;
  const double vxy = sxy - sx * sy / m;
  const double vyy = syy - sy * sy / m;
  if (vxx <= 0.0) return vyy;  // vertical stack of x values
  return std::max(0.0, vyy - vxy * vxy / vxx);
}

}  // namespace

ElbowResult find_elbow(const MetricCurve& curve, ElbowMethod method) {
  curve.validate();
  const std::size_t len = curve.k_values.size();
  if (len < 3) throw ValidationError("find_elbow: curve needs at least 3 points");

  // Min-max normalize both axes so the geometry is scale-free.
  std::vector<double> x(len), y(len);
  double ymin = curve.scores[0], ymax = curve.scores[0];
  for (double s : curve.scores) {
    ymin = std::min(ymin, s);
    ymax = std::max(ymax, s);
  }
  const double xspan = static_cast<double>(curve.k_values.back() - curve.k_values.front());
  const double yspan = ymax - ymin;
  const bool constant = yspan == 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    x[i] = static_cast<double>(curve.k_values[i] - curve.k_values.front()) / xspan;
    y[i] = constant ? 0.0 : (curve.scores[i] - ymin) / yspan;
  }
  // Uniform decreasing convention: negate curves that rise overall.
  if (y.back() > y.front())
    for (double& v : y) v = 1.0 - v;

  if (constant) return {curve.k_values[1], true};

  std::size_t best_i = 1;
  if (method == ElbowMethod::Triangle) {
    // Perpendicular distance from the chord (x0,y0)-(x1,y1); since both
    // axes are normalized the chord has fixed length, so the unnormalized
    // cross product ranks identically.
    const double dx = x.back() - x.front();
    const double dy = y.back() - y.front();
    double best = -1.0;
    for (std::size_t i = 1; i + 1 < len; ++i) {
      const double d = std::abs(dx * (y[i] - y.front()) - dy * (x[i] - x.front()));
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
  } else if (method == ElbowMethod::SecondDerivative) {
    // The quoted orientation: minimum absolute discrete second difference.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < len; ++i) {
      const double dd = std::abs(y[i - 1] - 2.0 * y[i] + y[i + 1]);
      if (dd < best) {
        best = dd;
        best_i = i;
      }
    }
  } else {  // LinearFit
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < len; ++i) {
      const double sse = sse_of_line_fit(x, y, 0, i) + sse_of_line_fit(x, y, i, len - 1);
      if (sse < best) {
        best = sse;
        best_i = i;
      }
    }
  }
  return {curve.k_values[best_i], false};
}

}  // namespace kvote
