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

#ifndef KVOTE_ELBOW_HPP
#define KVOTE_ELBOW_HPP

#include <string>
#include <vector>

namespace kvote {

/// A metric evaluated along ascending candidate cluster counts.
struct MetricCurve {
  std::vector<int> k_values;     // strictly increasing
  std::vector<double> scores;    // same length, finite
  std::string metric_name;

  void validate() const;
};

enum class ElbowMethod { Triangle, SecondDerivative, LinearFit };

struct ElbowResult {
  int k = 0;
  bool degenerate = false;  // constant curve; k is the smallest interior point
};

/// Knee detection over a metric curve. Both axes are min-max normalized
/// first, and curves that increase overall are negated so every metric is
/// read through the same diminishing-returns convention. Endpoints are never
/// returned; all ties resolve to the smallest k.
///
///   triangle           maximize perpendicular distance from the chord
///                      joining the first and last curve points
///   second_derivative  minimize the absolute discrete second difference
///   linear_fit         breakpoint minimizing total SSE of a two-piece
///                      linear fit
ElbowResult find_elbow(const MetricCurve& curve, ElbowMethod method = ElbowMethod::Triangle);

}  // namespace kvote

#endif  // KVOTE_ELBOW_HPP
