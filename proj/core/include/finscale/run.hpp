#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "finscale/facmom.hpp"
#include "finscale/gaps.hpp"
#include "finscale/hurst.hpp"
#include "finscale/series.hpp"
#include "finscale/synth.hpp"

namespace finscale {

// One analysis invocation: which command, where the data comes from, where
// tables land, and the per-module knobs.
struct RunConfig {
  enum class Cmd { kSynth, kReturns, kDistFit, kFacMom, kGaps, kHurst, kPipeline };

  Cmd cmd = Cmd::kPipeline;
  std::string input;        // price csv; synth writes instead of reading
  std::string outdir = ".";
  char delimiter = ',';
  std::int64_t base_interval = 0;  // seconds; 0 infers from timestamps

  SyntheticSpec synth;
  double synth_scale = 1e-4;  // log-price units per synthetic return

  // returns
  std::size_t m = 1;
  bool overlap = false;
  bool normalize_output = false;
  double session_gap_factor = 0.0;  // 0 disables the session filter

  // distfit
  std::vector<std::size_t> scales = {1, 4, 12, 48, 96};
  double hill_fraction = 0.05;
  double hist_width = 0.25;  // histogram bin width / half-range, in sigmas
  double hist_range = 10.0;

  // facmom
  std::size_t window = 200;
  std::vector<std::size_t> bins = {1, 2, 4, 10, 20};
  std::vector<std::size_t> offsets = {50, 100};
  std::vector<std::string> kinds = {"pp", "mm", "pm", "plain"};

  // gaps
  std::string gap_direction = "both";  // "negative", "positive", "both"
  std::size_t gap_fit_min = 1;
  std::size_t gap_fit_max = 0;  // 0: largest length with >= 10 counts

  // hurst
  std::vector<std::size_t> taus;          // empty: powers of two up to n/8
  std::vector<double> hurst_qs = {1.0, 2.0, 3.0};
  bool systematics = true;
};

const char* cmd_name(RunConfig::Cmd c);

// A plain-text table: '#' comment header then delimited rows, all cells
// pre-rendered so emission is byte-deterministic.
struct TextTable {
  std::string name;              // file stem
  std::string extension = "xy";  // written as <name>.<extension>
  char sep = ' ';
  bool header_row = false;  // also emit the column names as a plain row
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ResultDocument {
  std::string version;
  std::string command;
  std::string config_json;   // canonical serialization of the knobs in force
  std::uint64_t config_hash = 0;
  std::string generated_at;  // UTC stamp; the one non-deterministic field
  std::vector<TextTable> tables;
  std::string summary_json;
};

ResultDocument run(const RunConfig& config);

// Writes <name>.xy per table plus summary.json into outdir (created if
// needed).
void write_document(const ResultDocument& doc, const std::string& outdir);

// Process exit status for a failure: 1 bad parameters, 2 bad data, 3 numeric
// breakdown.
int classify_exit(const std::exception& e);

std::uint64_t fnv1a64(std::string_view s);

std::string iso_timestamp_utc(std::int64_t epoch_seconds);

}  // namespace finscale
