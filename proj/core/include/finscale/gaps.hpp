#pragma once

#include <cstddef>
#include <vector>

#include "finscale/series.hpp"

namespace finscale {

// A "negative gap" of length g is a run of g consecutive positive returns
// between two negative ones, and vice versa. Zero returns are skipped before
// runs are formed.
enum class GapDirection { kPositive, kNegative };

const char* gap_direction_name(GapDirection d);

struct GapDistribution {
  GapDirection direction = GapDirection::kNegative;
  std::vector<std::size_t> lengths;  // ascending, populated lengths only
  std::vector<double> counts;
  double total = 0.0;  // terminated runs observed
};

// Counts terminated same-sign runs: a run ends when the opposite sign prints;
// an unterminated trailing run is dropped. Both signs must occur.
GapDistribution gap_distribution(const ReturnSeries& rs, GapDirection direction);

struct GapFit {
  double rho = 0.0;      // decay rate: counts ~ exp(-rho g); ln 2 for a fair coin
  double stderr_ = 0.0;
  double intercept = 0.0;
  std::size_t g_min = 1;
  std::size_t g_max = 1;
};

// Weighted least squares of ln(count) against g with weights = counts over
// g in [g_min, g_max]; g_max = 0 selects the largest length with >= 10 counts.
GapFit fit_gap_slope(const GapDistribution& dist, std::size_t g_min = 1, std::size_t g_max = 0);

}  // namespace finscale
