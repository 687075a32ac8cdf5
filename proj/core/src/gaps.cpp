#include "finscale/gaps.hpp"

#include <cmath>
#include <map>
#include <string>

#include "finscale/error.hpp"

namespace finscale {

const char* gap_direction_name(GapDirection d) {
  return d == GapDirection::kPositive ? "positive" : "negative";
}

GapDistribution gap_distribution(const ReturnSeries& rs, GapDirection direction) {
  // A negative gap is a run of positive returns, and vice versa.
  const int run_sign = direction == GapDirection::kNegative ? 1 : -1;
  bool saw_pos = false, saw_neg = false;
  std::map<std::size_t, double> hist;
  std::size_t run = 0;
  for (double v : rs.values) {
    if (v == 0.0) continue;
    const int s = v > 0.0 ? 1 : -1;
    (s > 0 ? saw_pos : saw_neg) = true;
    if (s == run_sign) {
      ++run;
    } else {
      if (run > 0) hist[run] += 1.0;
      run = 0;
    }
  }
  // A trailing run has not been terminated by the opposite sign; drop it.
  if (!saw_pos || !saw_neg)
    throw DataError("returns carry a single sign; gap lengths are unbounded");
  GapDistribution dist;
  dist.direction = direction;
  for (const auto& [g, c] : hist) {
    dist.lengths.push_back(g);
    dist.counts.push_back(c);
    dist.total += c;
  }
  if (dist.lengths.empty()) throw DataError("no terminated runs found");
  return dist;
}

GapFit fit_gap_slope(const GapDistribution& dist, std::size_t g_min, std::size_t g_max) {
  if (g_min == 0) throw ParamError("gap lengths start at 1");
  if (g_max == 0) {
    for (std::size_t i = 0; i < dist.lengths.size(); ++i)
      if (dist.counts[i] >= 10.0) g_max = dist.lengths[i];
    if (g_max == 0) g_max = dist.lengths.back();
  }
  if (g_max < g_min) throw ParamError("gap fit range is empty");

  double sw = 0.0, swx = 0.0, swy = 0.0;
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < dist.lengths.size(); ++i) {
    const std::size_t g = dist.lengths[i];
    if (g < g_min || g > g_max || !(dist.counts[i] > 0.0)) continue;
    const double x = static_cast<double>(g);
    const double y = std::log(dist.counts[i]);
    const double w = dist.counts[i];
    xs.push_back(x), ys.push_back(y), ws.push_back(w);
    sw += w, swx += w * x, swy += w * y;
  }
  if (xs.size() < 3) throw FitError("gap fit needs >= 3 populated lengths in range");
  const double mx = swx / sw, my = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("gap fit range is degenerate");
  GapFit fit;
  fit.rho = -sxy / sxx;
  fit.intercept = my + fit.rho * mx;
  fit.stderr_ = 1.0 / std::sqrt(sxx);  // Poisson: Var ln N ~ 1/N = 1/w
  fit.g_min = g_min;
  fit.g_max = g_max;
  return fit;
}

}  // namespace finscale
