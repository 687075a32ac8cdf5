#include "finscale/synth.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "finscale/error.hpp"
#include "finscale/fft.hpp"
#include "finscale/rng.hpp"

namespace finscale {
namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0) || !(hurst < 1.0)) throw ParamError("hurst exponent must lie in (0, 1)");
}

ReturnSeries wrap_returns(std::vector<double> values) {
  ReturnSeries rs;
  rs.dt = 1;
  rs.values = std::move(values);
  rs.start_timestamps.resize(rs.values.size());
  for (std::size_t i = 0; i < rs.start_timestamps.size(); ++i)
    rs.start_timestamps[i] = static_cast<std::int64_t>(i);
  rs.sample_mean = mean_of(rs.values);
  rs.sample_std = population_std_of(rs.values);
  return rs;
}

// Unit-variance fGn increments via circulant embedding; Hosking fallback when
// the embedding spectrum has a materially negative eigenvalue.
std::vector<double> gen_fgn(double hurst, std::size_t n, std::uint64_t seed) {
  check_hurst(hurst);
  if (n == 0) return {};

  std::size_t p = 1;
  while (p < n) p <<= 1;
  const std::size_t m = 2 * p;

  std::vector<std::complex<double>> c(m);
  for (std::size_t j = 0; j <= p; ++j) c[j] = fgn_autocovariance(hurst, j);
  for (std::size_t j = 1; j < p; ++j) c[m - j] = c[j];
  fft_radix2(c, false);

  double lam_min = c[0].real(), lam_max = c[0].real();
  for (std::size_t j = 0; j < m; ++j) {
    lam_min = std::min(lam_min, c[j].real());
    lam_max = std::max(lam_max, c[j].real());
  }
  if (lam_min < -1e-8 * lam_max) {
    std::vector<double> fgn(n);
    std::vector<double> pos = gen_fbm_hosking(hurst, n, seed);
    for (std::size_t i = 0; i < n; ++i) fgn[i] = pos[i] - (i ? pos[i - 1] : 0.0);
    return fgn;
  }

  Rng rng(seed);
  std::vector<std::complex<double>> a(m);
  const double md = static_cast<double>(m);
  a[0] = std::sqrt(std::max(0.0, c[0].real()) / md) * rng.normal();
  a[p] = std::sqrt(std::max(0.0, c[p].real()) / md) * rng.normal();
  for (std::size_t j = 1; j < p; ++j) {
    const double amp = std::sqrt(std::max(0.0, c[j].real()) / (2.0 * md));
    const double re = rng.normal(), im = rng.normal();
    a[j] = {amp * re, amp * im};
    a[m - j] = std::conj(a[j]);
  }
  fft_radix2(a, false);

  std::vector<double> fgn(n);
  for (std::size_t i = 0; i < n; ++i) fgn[i] = a[i].real();
  return fgn;
}

}  // namespace

double fgn_autocovariance(double hurst, std::size_t k) {
  if (k == 0) return 1.0;
  const double kd = static_cast<double>(k);
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(kd + 1.0, h2) - 2.0 * std::pow(kd, h2) + std::pow(kd - 1.0, h2));
}

ReturnSeries gen_iid(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  std::vector<double> v(spec.n);
  if (spec.model == Model::kGaussianIid) {
    for (double& x : v) x = rng.normal();
  } else if (spec.model == Model::kStudentTIid) {
    for (double& x : v) x = rng.student_t_unit(spec.nu);
  } else {
    throw ParamError("gen_iid handles only the iid models");
  }
  return wrap_returns(std::move(v));
}

ReturnSeries gen_vol_cluster(const SyntheticSpec& spec) {
  if (!(spec.phi > -1.0) || !(spec.phi < 1.0))
    throw ParamError("log-volatility persistence must lie in (-1, 1)");
  if (!(spec.sigma_v >= 0.0)) throw ParamError("log-volatility scale must be >= 0");
  Rng rng(spec.seed);
  const double sd_h = spec.sigma_v / std::sqrt(1.0 - spec.phi * spec.phi);
  double h = sd_h * rng.normal();
  std::vector<double> v(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    v[i] = std::exp(0.5 * h) * rng.normal();
    h = spec.phi * h + spec.sigma_v * rng.normal();
  }
  ReturnSeries rs = wrap_returns(std::move(v));
  return normalize(rs);
}

std::vector<double> gen_fbm(double hurst, std::size_t n, std::uint64_t seed) {
  std::vector<double> pos = gen_fgn(hurst, n, seed);
  for (std::size_t i = 1; i < pos.size(); ++i) pos[i] += pos[i - 1];
  return pos;
}

std::vector<double> gen_fbm_hosking(double hurst, std::size_t n, std::uint64_t seed) {
  check_hurst(hurst);
  std::vector<double> x(n);
  if (n == 0) return x;
  Rng rng(seed);
  x[0] = rng.normal();
  std::vector<double> phi, phi_prev;
  double v = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double num = fgn_autocovariance(hurst, k);
    for (std::size_t j = 1; j < k; ++j) num -= phi_prev[j - 1] * fgn_autocovariance(hurst, k - j);
    const double pk = num / v;
    phi.assign(k, 0.0);
    phi[k - 1] = pk;
    for (std::size_t j = 1; j < k; ++j) phi[j - 1] = phi_prev[j - 1] - pk * phi_prev[k - 1 - j];
    v *= 1.0 - pk * pk;
    double mean = 0.0;
    for (std::size_t j = 1; j <= k; ++j) mean += phi[j - 1] * x[k - j];
    x[k] = mean + std::sqrt(std::max(v, 0.0)) * rng.normal();
    phi_prev = phi;
  }
  for (std::size_t i = 1; i < n; ++i) x[i] += x[i - 1];
  return x;
}

std::vector<double> simulate_sde(const DriftDiffusion& dd, double dt, std::size_t n,
                                 std::uint64_t seed, const SdeOptions& opts) {
  if (!(dt > 0.0)) throw ParamError("step size dt must be positive");
  if (!(opts.bound > 0.0)) throw ParamError("rejection bound must be positive");
  Rng rng(seed);
  const double noise = std::sqrt(dd.D * dt);
  double x = opts.x0;
  std::vector<double> out;
  out.reserve(n);
  const std::size_t total = opts.burn_in + n;
  for (std::size_t i = 0; i < total; ++i) {
    const double xn = x + dd.f(x) * dt + dd.g(x) * noise * rng.normal();
    if (!std::isfinite(xn))
      throw StabilityError("divergent integration at step " + std::to_string(i) +
                           "; reduce step size dt = " + std::to_string(dt));
    if (std::fabs(xn) <= opts.bound) x = xn;
    if (i >= opts.burn_in) out.push_back(x);
  }
  return out;
}

ReturnSeries gen_returns(const SyntheticSpec& spec) {
  switch (spec.model) {
    case Model::kGaussianIid:
    case Model::kStudentTIid:
      return gen_iid(spec);
    case Model::kVolCluster:
      return gen_vol_cluster(spec);
    case Model::kFbm:
      return wrap_returns(gen_fgn(spec.hurst, spec.n, spec.seed));
    case Model::kSde: {
      DriftDiffusion dd;
      dd.case_ = spec.sde_case;
      dd.nu = spec.nu;
      dd.D = spec.D;
      dd.lambda = spec.lambda;
      SdeOptions opts;
      opts.burn_in = spec.burn_in;
      return wrap_returns(simulate_sde(dd, spec.dt, spec.n, spec.seed, opts));
    }
  }
  throw ParamError("unknown synthetic model");
}

}  // namespace finscale
