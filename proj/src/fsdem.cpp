#include "fseval/fsdem.hpp"

#include <algorithm>
#include <cmath>

namespace fseval {

void MetricCurve::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].mean)) throw Error("curve " + metric + ": non-finite mean");
    if (i > 0 && !(points[i].ratio > points[i - 1].ratio))
      throw Error("curve " + metric + ": ratios must be strictly increasing");
  }
}

double fsdem_score(const MetricCurve& curve) {
  if (curve.points.empty()) throw Error("fsdem_score: empty curve");
  curve.validate();
  const auto n = curve.points.size();
  VectorXd p(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) p(static_cast<Index>(i)) = curve.points[i].mean;
  // Work on deviations from the first point so a constant curve returns its
  // value exactly.
  const double base = p(0);
  const VectorXd dev = p.array() - base;
  const double mean = base + dev.mean();
  if (n == 1) return mean;

  const VectorXd t = VectorXd::LinSpaced(static_cast<Index>(n), 0.0, 1.0);
  const VectorXd tc = t.array() - t.mean();
  const double slope = tc.dot(dev) / tc.squaredNorm();
  return mean + slope;
}

std::optional<double> fsdem_stability(const MetricCurve& curve) {
  curve.validate();
  const auto n = curve.points.size();
  if (n < 2) return std::nullopt;
  VectorXd diff(static_cast<Index>(n - 1));
  for (std::size_t i = 0; i + 1 < n; ++i)
    diff(static_cast<Index>(i)) = curve.points[i + 1].mean - curve.points[i].mean;
  double spread = 0.0;
  if (diff.size() > 1)
    spread = std::sqrt((diff.array() - diff.mean()).square().sum() /
                       static_cast<double>(diff.size() - 1));
  return std::clamp(1.0 - spread, 0.0, 1.0);
}

FsdemScore fsdem(const MetricCurve& curve) {
  return {fsdem_score(curve), fsdem_stability(curve)};
}

}  // namespace fseval
