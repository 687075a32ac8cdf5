#pragma once

#include <cstddef>
#include <vector>

#include "finscale/series.hpp"

namespace finscale {

struct StructPoint {
  double tau = 0.0;
  double value = 0.0;  // F_q(tau)
};

enum class Weighting { kUniform, kExponential };

// Scale-free structure function of a path x(0..N-1):
//   F_q(tau) = sqrt( <|x(t+tau)-x(t)|^q>_t ) / sqrt( <|x(t)|^q>_t )
// (denominator over all t). Exponential weighting multiplies each term by
// alpha^(age), age measured from the most recent usable index.
std::vector<StructPoint> structure_function(const std::vector<double>& path,
                                            const std::vector<std::size_t>& taus, double q,
                                            Weighting weighting = Weighting::kUniform,
                                            double alpha = 0.999);

struct HurstFit {
  double q = 2.0;
  double hurst = 0.0;     // 2/q times the lnF-lntau slope
  double stderr_ = 0.0;   // residual-based, propagated through the 2/q factor
  double tau_min = 0.0;
  double tau_max = 0.0;
  std::size_t n_points = 0;
  bool range_ok = false;  // >= 5 points spanning at least a decade
  bool accepted = false;  // estimate inside (0, 1)
};

HurstFit fit_hurst(const std::vector<StructPoint>& points, double q);

struct SystematicsProtocol {
  int n_subperiods = 3;         // contiguous re-based segments
  bool drop_endpoints = true;   // refit without the smallest / largest tau
  std::vector<double> alphas = {0.999};  // exponential-weighting variants
};

struct HurstSystematics {
  HurstFit central;
  double total_err = 0.0;  // max |H_variant - H_central|
  std::size_t n_variants = 0;
  std::vector<double> variant_hurst;
};

HurstSystematics hurst_systematics(const std::vector<double>& path,
                                   const std::vector<std::size_t>& taus, double q,
                                   const SystematicsProtocol& protocol = {});

// One fit per moment order; H(q) flat for monofractal paths.
std::vector<HurstFit> generalized_hurst_scan(const std::vector<double>& path,
                                             const std::vector<std::size_t>& taus,
                                             const std::vector<double>& qs);

// Powers of two up to span/8.
std::vector<std::size_t> default_taus(std::size_t span);

// Path positions from return increments: x(t) = sum of the first t+1 returns.
std::vector<double> cumulative_path(const ReturnSeries& rs);

}  // namespace finscale
