#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace finscale {

// Price observations on a (nominally) regular grid.  Timestamps are epoch
// seconds, strictly increasing; prices are strictly positive.
struct PriceSeries {
  std::string symbol;
  std::int64_t base_interval = 0;  // seconds
  std::vector<std::int64_t> timestamps;
  std::vector<double> prices;
};

// Throws unless the invariants above hold and the series has >= 2 samples.
void validate_price_series(const PriceSeries& ps);

// Log-returns at lag dt = m * base_interval.  sample_mean / sample_std always
// describe the sample the values were standardized from: for a raw series
// they equal the current moments, after normalize() they hold the subtracted
// mu and divisor sigma.  The std convention is population (divide by N).
struct ReturnSeries {
  std::int64_t dt = 1;  // seconds
  std::vector<double> values;
  std::vector<std::int64_t> start_timestamps;  // window start stamps
  bool normalized = false;
  double sample_mean = 0.0;
  double sample_std = 1.0;
};

struct ReturnOptions {
  // Overlapping windows (stride 1) are a display aid only; the default
  // non-overlapping stride keeps samples independent for fitting.
  bool overlap = false;
  // When > 0, drop any return whose window spans a timestamp gap larger than
  // session_gap_factor * base_interval (session break filter).  No forward
  // filling is ever applied.
  double session_gap_factor = 0.0;
};

// values[j] = ln(p[i+m] / p[i]); i steps by m (by 1 with overlap).
ReturnSeries log_returns(const PriceSeries& ps, int m, const ReturnOptions& opt = {});

// Block sums of m consecutive returns: equivalent to recomputing log-returns
// at lag m*dt from the same price path.  Trailing partial block is dropped.
ReturnSeries aggregate(const ReturnSeries& rs, int m);

// (x - mean) / population_std.  Exactly idempotent: a normalized input is
// returned unchanged.  Throws DataError on zero variance.
ReturnSeries normalize(const ReturnSeries& rs);

double mean_of(const std::vector<double>& v);
double population_std_of(const std::vector<double>& v);

}  // namespace finscale
