#include "finscale/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finscale/error.hpp"

namespace finscale {
namespace {

double weighted_abs_moment(const double* x, std::size_t n, double q, Weighting weighting,
                           double alpha) {
  double num = 0.0, den = 0.0;
  if (weighting == Weighting::kUniform) {
    for (std::size_t t = 0; t < n; ++t) num += std::pow(std::fabs(x[t]), q);
    den = static_cast<double>(n);
  } else {
    // Most recent term carries weight 1; weights decay backwards by alpha.
    double w = 1.0;
    for (std::size_t t = n; t-- > 0;) {
      num += w * std::pow(std::fabs(x[t]), q);
      den += w;
      w *= alpha;
    }
  }
  return num / den;
}

}  // namespace

std::vector<StructPoint> structure_function(const std::vector<double>& path,
                                            const std::vector<std::size_t>& taus, double q,
                                            Weighting weighting, double alpha) {
  const std::size_t n = path.size();
  if (n < 2) throw DataError("path too short for structure functions");
  if (!(q > 0.0)) throw ParamError("moment order q must be positive");
  if (!(alpha > 0.0) || !(alpha <= 1.0)) throw ParamError("weighting alpha must lie in (0, 1]");
  if (taus.empty()) throw ParamError("no lags given");

  const double denom = weighted_abs_moment(path.data(), n, q, weighting, alpha);
  if (!(denom > 0.0)) throw DataError("path is identically zero; scale ratio undefined");

  std::vector<StructPoint> out;
  out.reserve(taus.size());
  std::vector<double> diff;
  for (std::size_t tau : taus) {
    if (tau == 0) throw ParamError("lag 0 carries no increment");
    if (tau >= n)
      throw DataError("lag " + std::to_string(tau) + " out of range for path of length " +
                      std::to_string(n));
    diff.resize(n - tau);
    for (std::size_t t = 0; t + tau < n; ++t) diff[t] = path[t + tau] - path[t];
    const double num = weighted_abs_moment(diff.data(), diff.size(), q, weighting, alpha);
    StructPoint p;
    p.tau = static_cast<double>(tau);
    p.value = std::sqrt(num) / std::sqrt(denom);
    out.push_back(p);
  }
  return out;
}

HurstFit fit_hurst(const std::vector<StructPoint>& points, double q) {
  std::vector<double> xs, ys;
  for (const StructPoint& p : points) {
    if (!(p.value > 0.0)) continue;
    xs.push_back(std::log(p.tau));
    ys.push_back(std::log(p.value));
  }
  const std::size_t n = xs.size();
  if (n < 2) throw FitError("hurst fit needs >= 2 usable scale points");

  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sx += xs[i], sy += ys[i];
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("lags are degenerate; slope undefined");
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - my - slope * (xs[i] - mx);
    ss += e * e;
  }
  const double se_slope = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;

  HurstFit fit;
  fit.q = q;
  fit.hurst = slope * 2.0 / q;  // F ~ tau^(H q / 2)
  fit.stderr_ = se_slope * 2.0 / q;
  fit.n_points = n;
  double tmin = points.front().tau, tmax = points.front().tau;
  for (const StructPoint& p : points) {
    tmin = std::min(tmin, p.tau);
    tmax = std::max(tmax, p.tau);
  }
  fit.tau_min = tmin;
  fit.tau_max = tmax;
  fit.range_ok = n >= 5 && tmax >= 10.0 * tmin;
  fit.accepted = fit.hurst > 0.0 && fit.hurst < 1.0;
  return fit;
}

HurstSystematics hurst_systematics(const std::vector<double>& path,
                                   const std::vector<std::size_t>& taus, double q,
                                   const SystematicsProtocol& protocol) {
  HurstSystematics out;
  out.central = fit_hurst(structure_function(path, taus, q), q);

  auto try_variant = [&out](const std::vector<double>& p, const std::vector<std::size_t>& ts,
                            double qq, Weighting w, double alpha) {
    if (ts.size() < 2) return;
    try {
      const HurstFit fit = fit_hurst(structure_function(p, ts, qq, w, alpha), qq);
      out.variant_hurst.push_back(fit.hurst);
    } catch (const Error&) {
      // A variant that cannot be fitted contributes no spread.
    }
  };

  if (protocol.n_subperiods > 1) {
    const std::size_t seg = path.size() / static_cast<std::size_t>(protocol.n_subperiods);
    for (int s = 0; s < protocol.n_subperiods; ++s) {
      const std::size_t lo = static_cast<std::size_t>(s) * seg;
      std::vector<double> sub(path.begin() + static_cast<std::ptrdiff_t>(lo),
                              path.begin() + static_cast<std::ptrdiff_t>(lo + seg));
      for (double& v : sub) v -= path[lo];  // re-base each segment
      std::vector<std::size_t> ts;
      for (std::size_t t : taus)
        if (t <= seg / 8) ts.push_back(t);
      try_variant(sub, ts, q, Weighting::kUniform, 1.0);
    }
  }
  if (protocol.drop_endpoints && taus.size() >= 3) {
    std::vector<std::size_t> sorted = taus;
    std::sort(sorted.begin(), sorted.end());
    try_variant(path, {sorted.begin() + 1, sorted.end()}, q, Weighting::kUniform, 1.0);
    try_variant(path, {sorted.begin(), sorted.end() - 1}, q, Weighting::kUniform, 1.0);
  }
  for (double alpha : protocol.alphas)
    try_variant(path, taus, q, Weighting::kExponential, alpha);

  out.n_variants = out.variant_hurst.size();
  for (double h : out.variant_hurst)
    out.total_err = std::max(out.total_err, std::fabs(h - out.central.hurst));
  return out;
}

std::vector<HurstFit> generalized_hurst_scan(const std::vector<double>& path,
                                             const std::vector<std::size_t>& taus,
                                             const std::vector<double>& qs) {
  if (qs.empty()) throw ParamError("no moment orders given");
  std::vector<HurstFit> out;
  out.reserve(qs.size());
  for (double q : qs) out.push_back(fit_hurst(structure_function(path, taus, q), q));
  return out;
}

std::vector<std::size_t> default_taus(std::size_t span) {
  std::vector<std::size_t> taus;
  for (std::size_t t = 1; t <= span / 8; t *= 2) taus.push_back(t);
  return taus;
}

std::vector<double> cumulative_path(const ReturnSeries& rs) {
  std::vector<double> path(rs.values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    acc += rs.values[i];
    path[i] = acc;
  }
  return path;
}

}  // namespace finscale
