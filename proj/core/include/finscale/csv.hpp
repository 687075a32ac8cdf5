#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "finscale/series.hpp"

namespace finscale {

// Column selected either by zero-based index or, when name is non-empty, by
// header name (a header row is then required).
struct ColumnRef {
  int index = -1;
  std::string name;
};

struct CsvSchema {
  char delimiter = ',';
  ColumnRef time_col{0, ""};
  ColumnRef price_col{1, ""};
  enum class Header { kAuto, kYes, kNo } header = Header::kAuto;
  std::string symbol = "SERIES";
  // When > 0, overrides the base interval inferred from the timestamp grid
  // (gcd of successive gaps).
  std::int64_t base_interval_override = 0;
};

// Epoch seconds either as a plain integer or as ISO-8601 with an optional
// fixed UTC offset: YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+HH:MM|-HH:MM].
std::int64_t parse_time_value(const std::string& field, std::size_t line_no);

// Parses delimiter-separated (timestamp, price) rows.  Comment lines starting
// with '#' and blank lines are skipped.  Malformed rows, non-positive prices
// and non-monotone timestamps raise errors naming the offending line.
PriceSeries parse_prices(std::istream& in, const CsvSchema& schema = {});

// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double x);

void write_prices(std::ostream& out, const PriceSeries& ps, char delimiter,
                  const std::vector<std::string>& comment_lines);
void write_returns(std::ostream& out, const ReturnSeries& rs, char delimiter,
                   const std::vector<std::string>& comment_lines);

}  // namespace finscale
