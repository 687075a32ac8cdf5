#include "finscale/series.hpp"

#include <cmath>
#include <string>

#include "finscale/error.hpp"

namespace finscale {

void validate_price_series(const PriceSeries& ps) {
  if (ps.timestamps.size() != ps.prices.size())
    throw DataError("price series: timestamp/price length mismatch");
  if (ps.prices.size() < 2)
    throw DataError("price series: need at least 2 samples, have " +
                    std::to_string(ps.prices.size()));
  if (ps.base_interval <= 0) throw DataError("price series: base interval must be positive");
  for (std::size_t i = 0; i < ps.prices.size(); ++i) {
    if (!(ps.prices[i] > 0.0))
      throw DataError("price series: non-positive price at sample " + std::to_string(i));
    if (i > 0 && ps.timestamps[i] <= ps.timestamps[i - 1])
      throw DataError("price series: timestamps not strictly increasing at sample " +
                      std::to_string(i));
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double population_std_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size()));
}

namespace {

void finalize_stats(ReturnSeries& rs) {
  rs.sample_mean = mean_of(rs.values);
  rs.sample_std = population_std_of(rs.values);
}

// Largest single-step timestamp gap inside the window [i, i+m].
std::int64_t max_step_gap(const PriceSeries& ps, std::size_t i, std::size_t m) {
  std::int64_t g = 0;
  for (std::size_t j = i; j < i + m; ++j)
    g = std::max(g, ps.timestamps[j + 1] - ps.timestamps[j]);
  return g;
}

}  // namespace

ReturnSeries log_returns(const PriceSeries& ps, int m, const ReturnOptions& opt) {
  validate_price_series(ps);
  if (m < 1) throw ParamError("log_returns: lag multiple m must be >= 1");
  const std::size_t n = ps.prices.size();
  const std::size_t um = static_cast<std::size_t>(m);
  if (um > n - 1)
    throw DataError("log_returns: lag " + std::to_string(m) + " exceeds series span " +
                    std::to_string(n - 1));

  ReturnSeries rs;
  rs.dt = static_cast<std::int64_t>(m) * ps.base_interval;
  const std::size_t stride = opt.overlap ? 1 : um;
  const double gap_limit = opt.session_gap_factor > 0.0
                               ? opt.session_gap_factor * static_cast<double>(ps.base_interval)
                               : 0.0;
  for (std::size_t i = 0; i + um < n; i += stride) {
    if (gap_limit > 0.0 && static_cast<double>(max_step_gap(ps, i, um)) > gap_limit) continue;
    rs.values.push_back(std::log(ps.prices[i + um] / ps.prices[i]));
    rs.start_timestamps.push_back(ps.timestamps[i]);
  }
  if (rs.values.empty()) throw DataError("log_returns: no returns survive the window/filters");
  finalize_stats(rs);
  return rs;
}

ReturnSeries aggregate(const ReturnSeries& rs, int m) {
  if (m < 1) throw ParamError("aggregate: block size must be >= 1");
  const std::size_t um = static_cast<std::size_t>(m);
  if (rs.values.size() < um) throw DataError("aggregate: series shorter than one block");
  ReturnSeries out;
  out.dt = rs.dt * m;
  const std::size_t blocks = rs.values.size() / um;
  out.values.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    double s = 0.0;
    for (std::size_t j = 0; j < um; ++j) s += rs.values[b * um + j];
    out.values.push_back(s);
    if (!rs.start_timestamps.empty()) out.start_timestamps.push_back(rs.start_timestamps[b * um]);
  }
  finalize_stats(out);
  return out;
}

ReturnSeries normalize(const ReturnSeries& rs) {
  if (rs.normalized) return rs;  // exact idempotence
  if (rs.values.empty()) throw DataError("normalize: empty series");
  const double mu = mean_of(rs.values);
  const double sigma = population_std_of(rs.values);
  if (!(sigma > 0.0)) throw DataError("normalize: degenerate series with zero variance");
  ReturnSeries out = rs;
  for (double& x : out.values) x = (x - mu) / sigma;
  out.normalized = true;
  out.sample_mean = mu;
  out.sample_std = sigma;
  return out;
}

}  // namespace finscale
