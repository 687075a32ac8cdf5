#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "finscale/series.hpp"

namespace finscale {

// Student-t density with nu degrees of freedom (standard parameterization,
// variance nu/(nu-2) for nu>2).
double t_density(double x, double nu);

// Student-t family rescaled to unit variance; requires nu > 2.
//   p(x; nu) = c(nu)/s * (1 + x^2/(nu-2))^(-(nu+1)/2),  s = sqrt((nu-2)/nu).
double t_density_unit(double x, double nu);

// Tail-exponent <-> nonextensivity parameter map: q = 1 + 2/(nu+1), nu > -1.
double nu_to_q(double nu);
// q in [1, 3): exact inverse; q = 1 returns the +infinity sentinel (Gaussian
// limit).
double q_to_nu(double q);

enum class Regime { kPowerLaw, kCrossover, kGaussian };

const char* regime_name(Regime r);

// Regime thresholds used by fit_student_t.
inline constexpr double kGaussLoglikGap = 5e-4;  // per-sample loglik gap below which: gaussian
inline constexpr double kGaussNuMin = 20.0;      // nu above which: gaussian
inline constexpr double kPowerNuMax = 5.0;       // nu below which: power_law
inline constexpr double kNuSearchLo = 2.05;
inline constexpr double kNuSearchHi = 200.0;

struct TailFit {
  double nu = 0.0;            // fitted degrees of freedom
  double q = 0.0;             // 1 + 2/(nu+1)
  double scale = 1.0;         // sample std the data were normalized by
  double loglik = 0.0;        // total log-likelihood at nu
  double loglik_gauss = 0.0;  // total Gaussian log-likelihood of the same sample
  double nu_stderr = 0.0;     // curvature-based standard error on nu
  std::size_t n = 0;
  Regime regime = Regime::kCrossover;
};

// Profile maximum-likelihood fit of the unit-variance Student-t family to a
// normalized return sample. Requires rs.normalized and >= 1000 values.
TailFit fit_student_t(const ReturnSeries& rs);

struct HillFit {
  double nu = 0.0;     // tail exponent estimate 1/mean(log excess)
  std::size_t k = 0;   // order statistics used
  double threshold = 0.0;
};

// Hill tail-exponent estimator on |values| of a normalized sample;
// k = floor(k_fraction * n) order statistics, k >= 50, k_fraction in (0, 0.1].
HillFit tail_exponent(const ReturnSeries& rs, double k_fraction = 0.05);

struct Histogram {
  std::vector<double> edges;    // n_bins + 1
  std::vector<double> counts;   // raw counts per bin
  std::vector<double> density;  // counts / (n_in_range * width)
};

// Fixed-width histogram of a normalized sample: bins of width_sigmas on
// [-range_sigmas, range_sigmas]; density normalized over the in-range counts.
Histogram make_histogram(const ReturnSeries& rs, double width_sigmas = 0.25,
                         double range_sigmas = 10.0);

struct ScaleFit {
  std::size_t m = 1;   // aggregation factor relative to the base series
  double dt = 0.0;     // time scale in seconds
  TailFit fit;
};

struct MultiScaleFit {
  std::vector<ScaleFit> fits;
  std::optional<double> crossover_dt;  // earliest scale classified gaussian
  std::vector<std::string> warnings;
};

// Fits the tail family at each aggregation factor of a base return series.
// Scales with fewer than 1000 surviving returns are skipped with a warning;
// an empty scale list yields an empty result.
MultiScaleFit multi_scale_fit(const ReturnSeries& base, const std::vector<std::size_t>& scales);
MultiScaleFit multi_scale_fit(const PriceSeries& ps, const std::vector<std::size_t>& scales);

// Drift/diffusion pair for the stationary-density and simulation routines.
// case 1: f=-x,   g=1                        -> exp(-x^2/D)
// case 2: f=lambda*g*g', g=1+x^2             -> power-law family
// case 3: f=D(3-nu)/4 * (2x/nu)(1+x^2/nu), g=1+x^2/nu -> Student-t kernel
struct DriftDiffusion {
  int case_ = 3;
  double nu = 3.0;
  double D = 1.0;
  double lambda = 0.5;

  double f(double x) const;
  double g(double x) const;
  double g_prime(double x) const;
};

// Stationary solution of the associated Fokker-Planck equation on `grid`:
//   P(x) = Z^-1 exp[ -int (2/D)(D g g' - f)/g^2 dx ],
// cumulative trapezoid with `refine` sub-steps per grid cell, normalized by
// trapezoid over the grid. Grid must be uniform and increasing.
std::vector<double> stationary_density(const DriftDiffusion& dd, const std::vector<double>& grid,
                                       int refine = 8);

std::vector<double> stationary_density(const std::function<double(double)>& f,
                                       const std::function<double(double)>& g,
                                       const std::function<double(double)>& g_prime, double D,
                                       const std::vector<double>& grid, int refine = 8);

// Uniform grid of n points spanning [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

}  // namespace finscale
