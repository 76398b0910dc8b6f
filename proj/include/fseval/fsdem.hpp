#pragma once

#include "fseval/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fseval {

struct CurvePoint {
  double ratio;
  double mean;
  double std;
};

// One metric's mean curve over a ratio grid.
struct MetricCurve {
  std::string experiment;
  std::string metric;
  std::vector<CurvePoint> points;

  void validate() const;
};

struct FsdemScore {
  double score = 0.0;
  std::optional<double> stability;  // missing for single-point curves
};

// mean(p) + OLS slope of p against positions rescaled to [0, 1]. Positions
// are the grid indices i / (n - 1); a single point sits at 0.5 with slope 0.
double fsdem_score(const MetricCurve& curve);

// 1 - sample std of the first differences, clamped to [0, 1]. With exactly
// two points the single difference has zero spread. Empty for < 2 points.
std::optional<double> fsdem_stability(const MetricCurve& curve);

FsdemScore fsdem(const MetricCurve& curve);

}  // namespace fseval
