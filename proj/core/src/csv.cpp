#include "finscale/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>

#include "finscale/error.hpp"

namespace finscale {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

bool parse_int_strict(const std::string& s, std::int64_t& v) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, v);
  return res.ec == std::errc() && res.ptr == e;
}

bool parse_double_strict(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool all_digits(const std::string& s, std::size_t pos, std::size_t count) {
  if (pos + count > s.size()) return false;
  for (std::size_t i = pos; i < pos + count; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

int num2(const std::string& s, std::size_t pos) {
  return (s[pos] - '0') * 10 + (s[pos + 1] - '0');
}

bool parse_iso8601(const std::string& s, std::int64_t& epoch) {
  // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+HH:MM|-HH:MM]
  if (s.size() < 19) return false;
  if (!all_digits(s, 0, 4) || s[4] != '-' || !all_digits(s, 5, 2) || s[7] != '-' ||
      !all_digits(s, 8, 2))
    return false;
  if (s[10] != 'T' && s[10] != ' ') return false;
  if (!all_digits(s, 11, 2) || s[13] != ':' || !all_digits(s, 14, 2) || s[16] != ':' ||
      !all_digits(s, 17, 2))
    return false;
  const int year = std::atoi(s.substr(0, 4).c_str());
  const int month = num2(s, 5);
  const int day = num2(s, 8);
  const int hh = num2(s, 11);
  const int mm = num2(s, 14);
  const int ss = num2(s, 17);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60)
    return false;
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {  // fractional seconds: truncated
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos, ++digits;
    if (digits == 0) return false;
  }
  std::int64_t offset = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' && pos + 1 == s.size()) {
      pos = s.size();
    } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':' &&
               all_digits(s, pos + 1, 2) && all_digits(s, pos + 4, 2)) {
      const int oh = num2(s, pos + 1);
      const int om = num2(s, pos + 4);
      offset = (s[pos] == '+' ? 1 : -1) * (oh * 3600 + om * 60);
      pos = s.size();
    } else {
      return false;
    }
  }
  epoch = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
          hh * 3600 + mm * 60 + ss - offset;
  return true;
}

int resolve_column(const ColumnRef& ref, const std::vector<std::string>& header,
                   const char* what) {
  if (ref.name.empty()) {
    if (ref.index < 0) throw ParamError(std::string("column for ") + what + " not specified");
    return ref.index;
  }
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == ref.name) return static_cast<int>(i);
  throw ParseError(std::string("header has no column named '") + ref.name + "' for " + what);
}

}  // namespace

std::int64_t parse_time_value(const std::string& field, std::size_t line_no) {
  std::int64_t v;
  if (parse_int_strict(field, v)) return v;
  if (parse_iso8601(field, v)) return v;
  throw ParseError("line " + std::to_string(line_no) + ": unparseable timestamp '" + field + "'");
}

PriceSeries parse_prices(std::istream& in, const CsvSchema& schema) {
  PriceSeries ps;
  ps.symbol = schema.symbol;

  int time_idx = schema.time_col.name.empty() ? schema.time_col.index : -1;
  int price_idx = schema.price_col.name.empty() ? schema.price_col.index : -1;
  const bool needs_names = !schema.time_col.name.empty() || !schema.price_col.name.empty();

  std::string line;
  std::size_t line_no = 0;
  bool header_resolved = schema.header == CsvSchema::Header::kNo && !needs_names;
  if (needs_names && schema.header == CsvSchema::Header::kNo)
    throw ParamError("named columns require a header row");

  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::vector<std::string> fields = split(stripped, schema.delimiter);

    if (!header_resolved) {
      bool is_header = schema.header == CsvSchema::Header::kYes;
      if (schema.header == CsvSchema::Header::kAuto) {
        // A first row whose time field parses as neither epoch nor ISO-8601
        // is taken as a header.
        std::int64_t tmp;
        const std::size_t probe =
            time_idx >= 0 ? static_cast<std::size_t>(time_idx) : std::size_t{0};
        is_header = probe >= fields.size() ||
                    (!parse_int_strict(fields[probe], tmp) && !parse_iso8601(fields[probe], tmp));
      }
      header_resolved = true;
      if (is_header) {
        time_idx = resolve_column(schema.time_col, fields, "timestamp");
        price_idx = resolve_column(schema.price_col, fields, "price");
        continue;
      }
      if (needs_names) throw ParseError("line 1: expected a header row with column names");
    }

    const std::size_t need =
        static_cast<std::size_t>(std::max(time_idx, price_idx)) + 1;
    if (fields.size() < need)
      throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                       std::to_string(need) + " fields, got " + std::to_string(fields.size()));

    const std::int64_t ts = parse_time_value(fields[static_cast<std::size_t>(time_idx)], line_no);
    double price;
    if (!parse_double_strict(fields[static_cast<std::size_t>(price_idx)], price))
      throw ParseError("line " + std::to_string(line_no) + ": unparseable price '" +
                       fields[static_cast<std::size_t>(price_idx)] + "'");
    if (!(price > 0.0))
      throw ParseError("line " + std::to_string(line_no) + ": non-positive price " +
                       format_double(price));
    if (!ps.timestamps.empty() && ts <= ps.timestamps.back())
      throw DataError("line " + std::to_string(line_no) +
                      ": timestamps not strictly increasing");
    ps.timestamps.push_back(ts);
    ps.prices.push_back(price);
  }

  if (ps.prices.size() < 2)
    throw DataError("input ends after " + std::to_string(ps.prices.size()) +
                    " rows; need at least 2");

  if (schema.base_interval_override > 0) {
    ps.base_interval = schema.base_interval_override;
  } else {
    std::int64_t g = 0;
    for (std::size_t i = 1; i < ps.timestamps.size(); ++i)
      g = std::gcd(g, ps.timestamps[i] - ps.timestamps[i - 1]);
    ps.base_interval = g;
  }
  validate_price_series(ps);
  return ps;
}

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_prices(std::ostream& out, const PriceSeries& ps, char delimiter,
                  const std::vector<std::string>& comment_lines) {
  for (const auto& c : comment_lines) out << "# " << c << "\n";
  out << "timestamp" << delimiter << "price\n";
  for (std::size_t i = 0; i < ps.prices.size(); ++i)
    out << ps.timestamps[i] << delimiter << format_double(ps.prices[i]) << "\n";
}

void write_returns(std::ostream& out, const ReturnSeries& rs, char delimiter,
                   const std::vector<std::string>& comment_lines) {
  for (const auto& c : comment_lines) out << "# " << c << "\n";
  out << "timestamp_start" << delimiter << "value\n";
  for (std::size_t i = 0; i < rs.values.size(); ++i) {
    const std::int64_t ts =
        i < rs.start_timestamps.size() ? rs.start_timestamps[i] : static_cast<std::int64_t>(i);
    out << ts << delimiter << format_double(rs.values[i]) << "\n";
  }
}

}  // namespace finscale
