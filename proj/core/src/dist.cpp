#include "finscale/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finscale/error.hpp"

namespace finscale {
namespace {

constexpr double kLnTwoPi = 1.8378770664093453;

double log_t_norm(double nu) {
  return std::lgamma(0.5 * (nu + 1.0)) - 0.5 * std::log(nu * M_PI) - std::lgamma(0.5 * nu);
}

// Total log-likelihood of a normalized sample under the unit-variance t family.
double t_loglik(const std::vector<double>& x, double nu) {
  const double lc = log_t_norm(nu) - 0.5 * std::log((nu - 2.0) / nu);
  double acc = 0.0;
  for (double v : x) acc += std::log1p(v * v / (nu - 2.0));
  return static_cast<double>(x.size()) * lc - 0.5 * (nu + 1.0) * acc;
}

}  // namespace

double t_density(double x, double nu) {
  if (!(nu > 0.0)) throw ParamError("degrees of freedom must be positive");
  return std::exp(log_t_norm(nu) - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double t_density_unit(double x, double nu) {
  if (!(nu > 2.0)) throw ParamError("unit-variance t family needs nu > 2");
  const double s = std::sqrt((nu - 2.0) / nu);
  return t_density(x / s, nu) / s;
}

double nu_to_q(double nu) {
  if (!(nu > -1.0)) throw ParamError("nu must exceed -1");
  return 1.0 + 2.0 / (nu + 1.0);
}

double q_to_nu(double q) {
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  if (!(q > 1.0) || !(q < 3.0)) throw ParamError("q must lie in [1, 3)");
  return 2.0 / (q - 1.0) - 1.0;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::kPowerLaw: return "power_law";
    case Regime::kCrossover: return "crossover";
    case Regime::kGaussian: return "gaussian";
  }
  return "?";
}

TailFit fit_student_t(const ReturnSeries& rs) {
  if (!rs.normalized) throw ParamError("tail fit expects a normalized return series");
  const std::vector<double>& x = rs.values;
  const std::size_t n = x.size();
  if (n < 1000) throw DataError("tail fit needs >= 1000 returns, got " + std::to_string(n));

  // Coarse scan in log(nu), then golden-section refinement on the bracket.
  constexpr int kScan = 33;
  const double la = std::log(kNuSearchLo), lb = std::log(kNuSearchHi);
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  std::vector<double> lls(kScan);
  for (int i = 0; i < kScan; ++i) {
    const double nu = std::exp(la + (lb - la) * i / (kScan - 1));
    lls[i] = t_loglik(x, nu);
    if (lls[i] > best_ll) best_ll = lls[i], best = i;
  }
  const int lo_i = std::max(0, best - 1), hi_i = std::min(kScan - 1, best + 1);
  double a = la + (lb - la) * lo_i / (kScan - 1);
  double b = la + (lb - la) * hi_i / (kScan - 1);

  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = t_loglik(x, std::exp(c)), fd = t_loglik(x, std::exp(d));
  while (b - a > 1e-6) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - kInvPhi * (b - a);
      fc = t_loglik(x, std::exp(c));
    } else {
      a = c, c = d, fc = fd;
      d = a + kInvPhi * (b - a);
      fd = t_loglik(x, std::exp(d));
    }
  }
  const double nu_hat = std::exp(0.5 * (a + b));

  TailFit out;
  out.nu = nu_hat;
  out.q = nu_to_q(nu_hat);
  out.scale = rs.sample_std;
  out.n = n;
  out.loglik = t_loglik(x, nu_hat);

  double sumsq = 0.0;
  for (double v : x) sumsq += v * v;
  out.loglik_gauss = -0.5 * static_cast<double>(n) * kLnTwoPi - 0.5 * sumsq;

  const double h = std::max(1e-3 * nu_hat, 1e-4);
  const double d2 = (t_loglik(x, nu_hat + h) - 2.0 * out.loglik + t_loglik(x, nu_hat - h)) / (h * h);
  out.nu_stderr = d2 < 0.0 ? 1.0 / std::sqrt(-d2) : 0.0;

  const double gap_per_n = (out.loglik - out.loglik_gauss) / static_cast<double>(n);
  if (gap_per_n < kGaussLoglikGap || nu_hat > kGaussNuMin)
    out.regime = Regime::kGaussian;
  else if (nu_hat < kPowerNuMax)
    out.regime = Regime::kPowerLaw;
  else
    out.regime = Regime::kCrossover;
  return out;
}

HillFit tail_exponent(const ReturnSeries& rs, double k_fraction) {
  if (!rs.normalized) throw ParamError("tail estimate expects a normalized return series");
  if (!(k_fraction > 0.0) || !(k_fraction <= 0.1))
    throw ParamError("tail fraction must lie in (0, 0.1]");
  std::vector<double> a(rs.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::fabs(rs.values[i]);
  const std::size_t n = a.size();
  const std::size_t k = static_cast<std::size_t>(k_fraction * static_cast<double>(n));
  if (k < 50)
    throw DataError("tail estimate needs k >= 50 order statistics, got k = " + std::to_string(k));
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k), a.end(),
                   std::greater<double>());
  const double threshold = a[k];  // (k+1)-th largest
  if (!(threshold > 0.0)) throw DataError("tail threshold is zero; sample too degenerate");
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += std::log(a[i] / threshold);
  if (!(acc > 0.0)) throw FitError("tail log-excesses vanish; no spread above threshold");
  HillFit out;
  out.k = k;
  out.threshold = threshold;
  out.nu = static_cast<double>(k) / acc;
  return out;
}

Histogram make_histogram(const ReturnSeries& rs, double width_sigmas, double range_sigmas) {
  if (!rs.normalized) throw ParamError("histogram expects a normalized return series");
  if (!(width_sigmas > 0.0) || !(range_sigmas > 0.0))
    throw ParamError("histogram width and range must be positive");
  const std::size_t n_bins =
      static_cast<std::size_t>(std::llround(2.0 * range_sigmas / width_sigmas));
  Histogram h;
  h.edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) h.edges[i] = -range_sigmas + width_sigmas * i;
  h.counts.assign(n_bins, 0.0);
  double in_range = 0.0;
  for (double v : rs.values) {
    if (v < -range_sigmas || v >= range_sigmas) continue;
    const auto b = static_cast<std::size_t>((v + range_sigmas) / width_sigmas);
    h.counts[std::min(b, n_bins - 1)] += 1.0;
    in_range += 1.0;
  }
  h.density.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i)
    h.density[i] = in_range > 0.0 ? h.counts[i] / (in_range * width_sigmas) : 0.0;
  return h;
}

MultiScaleFit multi_scale_fit(const ReturnSeries& base, const std::vector<std::size_t>& scales) {
  std::vector<std::size_t> ms = scales;
  std::sort(ms.begin(), ms.end());
  MultiScaleFit out;
  for (std::size_t m : ms) {
    if (m == 0) throw ParamError("aggregation factor must be >= 1");
    ReturnSeries r = m == 1 ? base : aggregate(base, static_cast<int>(m));
    if (r.values.size() < 1000) {
      out.warnings.push_back("scale m=" + std::to_string(m) + " skipped: only " +
                             std::to_string(r.values.size()) + " returns");
      continue;
    }
    ScaleFit sf;
    sf.m = m;
    sf.dt = static_cast<double>(r.dt);
    sf.fit = fit_student_t(normalize(r));
    if (sf.fit.regime == Regime::kGaussian && !out.crossover_dt) out.crossover_dt = sf.dt;
    out.fits.push_back(std::move(sf));
  }
  return out;
}

MultiScaleFit multi_scale_fit(const PriceSeries& ps, const std::vector<std::size_t>& scales) {
  return multi_scale_fit(log_returns(ps, 1), scales);
}

double DriftDiffusion::f(double x) const {
  switch (case_) {
    case 1: return -x;
    case 2: return lambda * g(x) * g_prime(x);
    case 3: return D * (3.0 - nu) / 4.0 * (2.0 * x / nu) * (1.0 + x * x / nu);
  }
  throw ParamError("drift/diffusion case must be 1, 2, or 3");
}

double DriftDiffusion::g(double x) const {
  switch (case_) {
    case 1: return 1.0;
    case 2: return 1.0 + x * x;
    case 3: return 1.0 + x * x / nu;
  }
  throw ParamError("drift/diffusion case must be 1, 2, or 3");
}

double DriftDiffusion::g_prime(double x) const {
  switch (case_) {
    case 1: return 0.0;
    case 2: return 2.0 * x;
    case 3: return 2.0 * x / nu;
  }
  throw ParamError("drift/diffusion case must be 1, 2, or 3");
}

std::vector<double> stationary_density(const DriftDiffusion& dd, const std::vector<double>& grid,
                                       int refine) {
  if (dd.case_ == 3 && !(dd.nu > 0.0)) throw ParamError("case 3 needs nu > 0");
  return stationary_density([&dd](double x) { return dd.f(x); },
                            [&dd](double x) { return dd.g(x); },
                            [&dd](double x) { return dd.g_prime(x); }, dd.D, grid, refine);
}

std::vector<double> stationary_density(const std::function<double(double)>& f,
                                       const std::function<double(double)>& g,
                                       const std::function<double(double)>& g_prime, double D,
                                       const std::vector<double>& grid, int refine) {
  if (!(D > 0.0)) throw ParamError("diffusion scale D must be positive");
  if (refine < 1) throw ParamError("refine must be >= 1");
  const std::size_t n = grid.size();
  if (n < 2) throw ParamError("density grid needs at least 2 points");
  const double dx = grid[1] - grid[0];
  if (!(dx > 0.0)) throw ParamError("density grid must be increasing");
  for (std::size_t i = 1; i < n; ++i)
    if (std::fabs((grid[i] - grid[i - 1]) - dx) > 1e-9 * std::fabs(dx))
      throw ParamError("density grid must be uniform");

  auto phi = [&](double x) {
    const double gv = g(x);
    if (std::fabs(gv) < 1e-12)
      throw StabilityError("diffusion coefficient vanishes at x = " + std::to_string(x));
    return (2.0 / D) * (D * gv * g_prime(x) - f(x)) / (gv * gv);
  };

  // ln P up to a constant: minus the cumulative integral of phi, each grid
  // cell integrated by composite trapezoid on `refine` sub-steps.
  std::vector<double> lnp(n);
  lnp[0] = 0.0;
  const double h = dx / refine;
  double left = phi(grid[0]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double cell = 0.5 * left;
    for (int j = 1; j < refine; ++j) cell += phi(grid[i] + h * j);
    const double right = phi(grid[i + 1]);
    cell = (cell + 0.5 * right) * h;
    lnp[i + 1] = lnp[i] - cell;
    left = right;
  }

  const double m = *std::max_element(lnp.begin(), lnp.end());
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::exp(lnp[i] - m);
  double z = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) z += 0.5 * (p[i] + p[i + 1]) * dx;
  if (!(z > 0.0) || !std::isfinite(z))
    throw StabilityError("density normalization failed; step size dx = " + std::to_string(dx));
  for (double& v : p) v /= z;
  return p;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw ParamError("grid needs at least 2 points");
  if (!(hi > lo)) throw ParamError("grid range must have hi > lo");
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

}  // namespace finscale
