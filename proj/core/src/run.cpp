#include "finscale/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "finscale/csv.hpp"
#include "finscale/dist.hpp"
#include "finscale/error.hpp"
#include "finscale/version.hpp"
#include "json.hpp"

namespace finscale {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::int64_t kSynthEpoch = 1609459200;  // 2021-01-01T00:00:00Z
constexpr double kInvSqrtTwoPi = 0.3989422804014327;

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt_size(std::size_t v) { return std::to_string(v); }

TextTable make_table(const ResultDocument& doc, const std::string& name,
                     const std::string& formula, std::vector<std::string> columns) {
  TextTable t;
  t.name = name;
  t.comments.push_back("finscale " + doc.version + " " + doc.command);
  t.comments.push_back(formula);
  t.comments.push_back("config " + hash_hex(doc.config_hash));
  std::string cols = "columns:";
  for (const auto& c : columns) cols += " " + c;
  t.comments.push_back(cols);
  t.columns = std::move(columns);
  return t;
}

ordered_json config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cmd_name(cfg.cmd);
  if (cfg.cmd == RunConfig::Cmd::kSynth) {
    const char* model = "";
    switch (cfg.synth.model) {
      case Model::kGaussianIid: model = "gaussian"; break;
      case Model::kStudentTIid: model = "student_t"; break;
      case Model::kFbm: model = "fbm"; break;
      case Model::kVolCluster: model = "vol_cluster"; break;
      case Model::kSde: model = "sde"; break;
    }
    j["model"] = model;
    j["n"] = cfg.synth.n;
    j["seed"] = cfg.synth.seed;
    switch (cfg.synth.model) {
      case Model::kStudentTIid: j["nu"] = cfg.synth.nu; break;
      case Model::kFbm: j["hurst"] = cfg.synth.hurst; break;
      case Model::kVolCluster:
        j["phi"] = cfg.synth.phi;
        j["sigma_v"] = cfg.synth.sigma_v;
        break;
      case Model::kSde:
        j["sde_case"] = cfg.synth.sde_case;
        j["nu"] = cfg.synth.nu;
        j["D"] = cfg.synth.D;
        j["lambda"] = cfg.synth.lambda;
        j["dt"] = cfg.synth.dt;
        j["burn_in"] = cfg.synth.burn_in;
        break;
      case Model::kGaussianIid: break;
    }
    j["scale"] = cfg.synth_scale;
    j["base_interval"] = cfg.base_interval > 0 ? cfg.base_interval : 300;
    return j;
  }

  j["input"] = cfg.input;
  j["base_interval"] = cfg.base_interval;
  j["m"] = cfg.m;
  j["overlap"] = cfg.overlap;
  j["session_gap_factor"] = cfg.session_gap_factor;
  switch (cfg.cmd) {
    case RunConfig::Cmd::kReturns:
      j["normalize"] = cfg.normalize_output;
      break;
    case RunConfig::Cmd::kDistFit:
      j["scales"] = cfg.scales;
      j["hill_fraction"] = cfg.hill_fraction;
      break;
    case RunConfig::Cmd::kFacMom:
      j["window"] = cfg.window;
      j["bins"] = cfg.bins;
      j["offsets"] = cfg.offsets;
      break;
    case RunConfig::Cmd::kGaps:
      j["direction"] = cfg.gap_direction;
      break;
    case RunConfig::Cmd::kHurst:
      j["taus"] = cfg.taus;
      j["qs"] = cfg.hurst_qs;
      j["systematics"] = cfg.systematics;
      break;
    case RunConfig::Cmd::kPipeline:
      j["scales"] = cfg.scales;
      j["hill_fraction"] = cfg.hill_fraction;
      j["window"] = cfg.window;
      j["bins"] = cfg.bins;
      j["offsets"] = cfg.offsets;
      j["direction"] = cfg.gap_direction;
      j["taus"] = cfg.taus;
      j["qs"] = cfg.hurst_qs;
      j["systematics"] = cfg.systematics;
      break;
    case RunConfig::Cmd::kSynth:
      break;
  }
  return j;
}

PriceSeries load_prices(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ParamError("no input file given");
  std::ifstream in(cfg.input);
  if (!in) throw ParseError("cannot open input file: " + cfg.input);
  CsvSchema schema;
  schema.delimiter = cfg.delimiter;
  schema.base_interval_override = cfg.base_interval;
  return parse_prices(in, schema);
}

ReturnSeries base_returns(const PriceSeries& ps, const RunConfig& cfg) {
  ReturnOptions opt;
  opt.overlap = cfg.overlap;
  opt.session_gap_factor = cfg.session_gap_factor;
  return log_returns(ps, static_cast<int>(cfg.m), opt);
}

// ---- synth ----------------------------------------------------------------

void run_synth(const RunConfig& cfg, ResultDocument& doc, ordered_json& summary) {
  const ReturnSeries r = gen_returns(cfg.synth);
  const std::int64_t bi = cfg.base_interval > 0 ? cfg.base_interval : 300;

  TextTable t = make_table(doc, "prices", "p(i) = exp(scale * sum_{j<i} x_j)",
                           {"timestamp", "price"});
  t.extension = "csv";
  t.sep = cfg.delimiter;
  t.header_row = true;
  t.rows.reserve(r.values.size() + 1);
  double lnp = 0.0;
  for (std::size_t i = 0; i <= r.values.size(); ++i) {
    if (std::fabs(lnp) > 700.0)
      throw StabilityError("synthetic log-price overflow; reduce scale " +
                           format_double(cfg.synth_scale));
    t.rows.push_back({std::to_string(kSynthEpoch + static_cast<std::int64_t>(i) * bi),
                      format_double(std::exp(lnp))});
    if (i < r.values.size()) lnp += cfg.synth_scale * r.values[i];
  }
  doc.tables.push_back(std::move(t));

  ordered_json res;
  res["n_returns"] = r.values.size();
  res["n_prices"] = r.values.size() + 1;
  res["sample_mean"] = r.sample_mean;
  res["sample_std"] = r.sample_std;
  summary["synth"] = res;
}

// ---- returns ----------------------------------------------------------------

void run_returns(const RunConfig& cfg, ResultDocument& doc, ordered_json& summary) {
  const PriceSeries ps = load_prices(cfg);
  ReturnSeries r = base_returns(ps, cfg);
  if (cfg.normalize_output) r = normalize(r);

  TextTable t = make_table(doc, "returns", "x_m(i) = ln p(i+m) - ln p(i), stride m",
                           {"timestamp_start", "value"});
  t.rows.reserve(r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i)
    t.rows.push_back({std::to_string(r.start_timestamps[i]), format_double(r.values[i])});
  doc.tables.push_back(std::move(t));

  ordered_json res;
  res["symbol"] = ps.symbol;
  res["base_interval"] = ps.base_interval;
  res["n"] = r.values.size();
  res["dt"] = r.dt;
  res["normalized"] = r.normalized;
  res["sample_mean"] = r.sample_mean;
  res["sample_std"] = r.sample_std;
  summary["returns"] = res;
}

// ---- distfit ----------------------------------------------------------------

void run_distfit(const RunConfig& cfg, const ReturnSeries& base, ResultDocument& doc,
                 ordered_json& summary) {
  const MultiScaleFit msf = multi_scale_fit(base, cfg.scales);
  if (msf.fits.empty()) {
    std::string detail;
    for (const auto& w : msf.warnings) detail += "; " + w;
    throw DataError("no aggregation scale kept >= 1000 returns" + detail);
  }

  TextTable t = make_table(
      doc, "distfit_scales",
      "p(x; nu) = c(nu)/s (1 + x^2/(nu-2))^(-(nu+1)/2), s = sqrt((nu-2)/nu); q = 1 + 2/(nu+1)",
      {"m", "dt", "nu", "nu_stderr", "q", "loglik_per_n", "gauss_gap_per_n", "regime"});
  ordered_json scales_json = ordered_json::array();
  for (const ScaleFit& sf : msf.fits) {
    const double n = static_cast<double>(sf.fit.n);
    t.rows.push_back({fmt_size(sf.m), format_double(sf.dt), format_double(sf.fit.nu),
                      format_double(sf.fit.nu_stderr), format_double(sf.fit.q),
                      format_double(sf.fit.loglik / n),
                      format_double((sf.fit.loglik - sf.fit.loglik_gauss) / n),
                      regime_name(sf.fit.regime)});
    ordered_json sj;
    sj["m"] = sf.m;
    sj["dt"] = sf.dt;
    sj["n"] = sf.fit.n;
    sj["nu"] = sf.fit.nu;
    sj["nu_stderr"] = sf.fit.nu_stderr;
    sj["q"] = sf.fit.q;
    sj["scale_sigma"] = sf.fit.scale;
    sj["regime"] = regime_name(sf.fit.regime);
    scales_json.push_back(sj);
  }
  doc.tables.push_back(std::move(t));

  // Histogram of the finest fitted scale against the fitted t and the Gaussian.
  const ScaleFit& finest = msf.fits.front();
  ReturnSeries rn =
      normalize(finest.m == 1 ? base : aggregate(base, static_cast<int>(finest.m)));
  const Histogram h = make_histogram(rn, cfg.hist_width, cfg.hist_range);
  TextTable ht = make_table(doc, "distfit_hist",
                            "density vs fitted p(x; nu) and the unit gaussian",
                            {"x_center", "count", "density", "t_fit", "gauss"});
  for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
    const double xc = 0.5 * (h.edges[i] + h.edges[i + 1]);
    ht.rows.push_back({format_double(xc), format_double(h.counts[i]), format_double(h.density[i]),
                       format_double(t_density_unit(xc, finest.fit.nu)),
                       format_double(kInvSqrtTwoPi * std::exp(-0.5 * xc * xc))});
  }
  doc.tables.push_back(std::move(ht));

  ordered_json res;
  res["scales"] = scales_json;
  if (msf.crossover_dt)
    res["crossover_dt"] = *msf.crossover_dt;
  else
    res["crossover_dt"] = nullptr;
  try {
    const HillFit hill = tail_exponent(normalize(base), cfg.hill_fraction);
    ordered_json hj;
    hj["nu"] = hill.nu;
    hj["k"] = hill.k;
    hj["threshold"] = hill.threshold;
    res["hill"] = hj;
  } catch (const Error& e) {
    res["hill"] = nullptr;
    res["hill_skipped"] = e.what();
  }
  res["warnings"] = msf.warnings;
  summary["distfit"] = res;
}

// ---- facmom ----------------------------------------------------------------

SignKind kind_from_name(const std::string& name) {
  if (name == "pp") return SignKind::kPP;
  if (name == "mm") return SignKind::kMM;
  if (name == "pm") return SignKind::kPM;
  if (name == "plain") return SignKind::kAll;
  throw ParamError("unknown sign kind: " + name + " (use pp, mm, pm, plain)");
}

void run_facmom(const RunConfig& cfg, const ReturnSeries& base, ResultDocument& doc,
                ordered_json& summary) {
  std::vector<SignKind> kinds;
  for (const std::string& k : cfg.kinds) kinds.push_back(kind_from_name(k));
  const FacMomTable table = facmom_scan(base, cfg.window, cfg.bins, cfg.offsets, kinds);

  const std::string formula =
      "F_q = <sum_k ff(n_k,q)/n_bins> / (<n>/n_bins)^q, ff = falling factorial";
  TextTable t = make_table(doc, "facmom", formula,
                           {"kind", "q", "n_bins", "value", "stat_err", "sys_err"});
  for (const FacMomRow& row : table.rows)
    t.rows.push_back({sign_kind_name(row.kind), std::to_string(row.q), fmt_size(row.n_bins),
                      format_double(row.value), format_double(row.stat_err),
                      format_double(row.sys_err)});
  doc.tables.push_back(std::move(t));

  // One xy file per kind for direct plotting of F_2 against the bin count.
  for (SignKind kind : kinds) {
    TextTable kt = make_table(doc, std::string("facmom_") + sign_kind_name(kind), formula,
                              {"n_bins", "value", "stat_err", "sys_err"});
    for (const FacMomRow& row : table.rows)
      if (row.kind == kind && row.q == 2)
        kt.rows.push_back({fmt_size(row.n_bins), format_double(row.value),
                           format_double(row.stat_err), format_double(row.sys_err)});
    doc.tables.push_back(std::move(kt));
  }

  ordered_json res;
  res["window"] = table.window_len;
  res["n_events"] = table.n_events;
  res["mean_pos"] = table.mean_pos;
  res["mean_neg"] = table.mean_neg;
  ordered_json slopes;
  for (SignKind kind : kinds) {
    try {
      const SlopeFit sf = intermittency_slope(table, kind, 2);
      ordered_json sj;
      sj["slope"] = sf.slope;
      sj["stderr"] = sf.stderr_;
      slopes[sign_kind_name(kind)] = sj;
    } catch (const Error&) {
      // fewer than 3 usable points for this kind
    }
  }
  res["slopes_q2"] = slopes;

  // Generating-function cross-checks on the all-sign multiplicity law.
  const SignEventSet ev = build_events(base, cfg.window, 1, 0);
  const MultiplicityDistribution dist = multiplicity_distribution(ev, SignKind::kAll);
  const std::vector<double> fmom = moments_from_distribution(dist, 3);
  double mean_n = 0.0;
  for (std::size_t n = 0; n < dist.probs.size(); ++n)
    mean_n += static_cast<double>(n) * dist.probs[n];
  const std::vector<double> kq = cumulants_from_factorial({fmom[1], fmom[2]}, mean_n);
  ordered_json gen;
  gen["p0"] = generating_function(dist, -1.0);
  gen["mean_n"] = mean_n;
  gen["f2"] = fmom[1];
  gen["f3"] = fmom[2];
  gen["k2"] = kq[0];
  gen["k3"] = kq[1];
  res["generating"] = gen;
  summary["facmom"] = res;
}

// ---- gaps ----------------------------------------------------------------

void run_gaps(const RunConfig& cfg, const ReturnSeries& base, ResultDocument& doc,
              ordered_json& summary) {
  std::vector<GapDirection> dirs;
  if (cfg.gap_direction == "negative")
    dirs = {GapDirection::kNegative};
  else if (cfg.gap_direction == "positive")
    dirs = {GapDirection::kPositive};
  else if (cfg.gap_direction == "both")
    dirs = {GapDirection::kNegative, GapDirection::kPositive};
  else
    throw ParamError("gap direction must be negative, positive, or both");

  TextTable t = make_table(doc, "gaps", "count(g) ~ exp(-rho g); fair-coin rho = ln 2",
                           {"direction", "g", "count", "frequency", "fit"});
  ordered_json res;
  for (GapDirection dir : dirs) {
    const GapDistribution dist = gap_distribution(base, dir);
    ordered_json dj;
    dj["total"] = dist.total;
    bool have_fit = false;
    GapFit fit;
    try {
      fit = fit_gap_slope(dist, cfg.gap_fit_min, cfg.gap_fit_max);
      have_fit = true;
      dj["rho"] = fit.rho;
      dj["stderr"] = fit.stderr_;
      dj["intercept"] = fit.intercept;
      dj["g_min"] = fit.g_min;
      dj["g_max"] = fit.g_max;
    } catch (const Error& e) {
      dj["fit_skipped"] = e.what();
    }
    for (std::size_t i = 0; i < dist.lengths.size(); ++i) {
      const double g = static_cast<double>(dist.lengths[i]);
      t.rows.push_back({gap_direction_name(dir), fmt_size(dist.lengths[i]),
                        format_double(dist.counts[i]), format_double(dist.counts[i] / dist.total),
                        have_fit ? format_double(std::exp(fit.intercept - fit.rho * g)) : "nan"});
    }
    res[gap_direction_name(dir)] = dj;
  }
  doc.tables.push_back(std::move(t));
  summary["gaps"] = res;
}

// ---- hurst ----------------------------------------------------------------

void run_hurst(const RunConfig& cfg, const ReturnSeries& base, ResultDocument& doc,
               ordered_json& summary) {
  const std::vector<double> path = cumulative_path(base);
  std::vector<std::size_t> taus = cfg.taus.empty() ? default_taus(path.size()) : cfg.taus;
  if (taus.size() < 2)
    throw DataError("path of length " + std::to_string(path.size()) +
                    " leaves fewer than 2 usable lags");

  TextTable t = make_table(
      doc, "hurst", "F_q(tau) = sqrt(<|x(t+tau)-x(t)|^q>) / sqrt(<|x|^q>) ~ tau^(H q/2)",
      {"q", "tau", "value", "ln_tau", "ln_value"});
  ordered_json fits_json = ordered_json::array();
  for (double q : cfg.hurst_qs) {
    const std::vector<StructPoint> pts = structure_function(path, taus, q);
    for (const StructPoint& p : pts)
      t.rows.push_back({format_double(q), format_double(p.tau), format_double(p.value),
                        format_double(std::log(p.tau)), format_double(std::log(p.value))});
    const HurstFit fit = fit_hurst(pts, q);
    ordered_json fj;
    fj["q"] = q;
    fj["hurst"] = fit.hurst;
    fj["stderr"] = fit.stderr_;
    fj["n_points"] = fit.n_points;
    fj["tau_min"] = fit.tau_min;
    fj["tau_max"] = fit.tau_max;
    fj["range_ok"] = fit.range_ok;
    fj["accepted"] = fit.accepted;
    fits_json.push_back(fj);
  }
  doc.tables.push_back(std::move(t));

  ordered_json res;
  res["n_path"] = path.size();
  res["taus"] = taus;
  res["fits"] = fits_json;
  if (cfg.systematics) {
    const HurstSystematics hs = hurst_systematics(path, taus, 2.0);
    ordered_json sj;
    sj["hurst"] = hs.central.hurst;
    sj["stat_err"] = hs.central.stderr_;
    sj["total_err"] = hs.total_err;
    sj["n_variants"] = hs.n_variants;
    sj["variants"] = hs.variant_hurst;
    res["systematics_q2"] = sj;
  }
  summary["hurst"] = res;
}

}  // namespace

const char* cmd_name(RunConfig::Cmd c) {
  switch (c) {
    case RunConfig::Cmd::kSynth: return "synth";
    case RunConfig::Cmd::kReturns: return "returns";
    case RunConfig::Cmd::kDistFit: return "distfit";
    case RunConfig::Cmd::kFacMom: return "facmom";
    case RunConfig::Cmd::kGaps: return "gaps";
    case RunConfig::Cmd::kHurst: return "hurst";
    case RunConfig::Cmd::kPipeline: return "pipeline";
  }
  return "?";
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string iso_timestamp_utc(std::int64_t epoch_seconds) {
  // Inverse of days_from_civil (proleptic Gregorian), UTC only.
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) rem += 86400, --days;
  const std::int64_t z = days + 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  const std::int64_t year = y + (m <= 2);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
  return buf;
}

ResultDocument run(const RunConfig& cfg) {
  ResultDocument doc;
  doc.version = kVersion;
  doc.command = cmd_name(cfg.cmd);
  const ordered_json cj = config_to_json(cfg);
  doc.config_json = cj.dump();
  doc.config_hash = fnv1a64(doc.config_json);
  doc.generated_at = iso_timestamp_utc(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());

  ordered_json summary;
  summary["version"] = doc.version;
  summary["command"] = doc.command;
  summary["config"] = cj;
  summary["config_hash"] = hash_hex(doc.config_hash);
  summary["generated_at"] = doc.generated_at;

  switch (cfg.cmd) {
    case RunConfig::Cmd::kSynth:
      run_synth(cfg, doc, summary);
      break;
    case RunConfig::Cmd::kReturns:
      run_returns(cfg, doc, summary);
      break;
    case RunConfig::Cmd::kDistFit: {
      const PriceSeries ps = load_prices(cfg);
      run_distfit(cfg, base_returns(ps, cfg), doc, summary);
      break;
    }
    case RunConfig::Cmd::kFacMom: {
      const PriceSeries ps = load_prices(cfg);
      run_facmom(cfg, base_returns(ps, cfg), doc, summary);
      break;
    }
    case RunConfig::Cmd::kGaps: {
      const PriceSeries ps = load_prices(cfg);
      run_gaps(cfg, base_returns(ps, cfg), doc, summary);
      break;
    }
    case RunConfig::Cmd::kHurst: {
      const PriceSeries ps = load_prices(cfg);
      run_hurst(cfg, base_returns(ps, cfg), doc, summary);
      break;
    }
    case RunConfig::Cmd::kPipeline: {
      const PriceSeries ps = load_prices(cfg);
      const ReturnSeries base = base_returns(ps, cfg);
      run_distfit(cfg, base, doc, summary);
      run_facmom(cfg, base, doc, summary);
      run_gaps(cfg, base, doc, summary);
      run_hurst(cfg, base, doc, summary);
      break;
    }
  }

  doc.summary_json = summary.dump(2) + "\n";
  return doc;
}

void write_document(const ResultDocument& doc, const std::string& outdir) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  for (const TextTable& t : doc.tables) {
    std::ofstream out(fs::path(outdir) / (t.name + "." + t.extension));
    if (!out) throw Error("cannot write table " + t.name + " in " + outdir);
    for (const std::string& c : t.comments) out << "# " << c << "\n";
    if (t.header_row) {
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? std::string(1, t.sep) : "") << t.columns[i];
      out << "\n";
    }
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? std::string(1, t.sep) : "") << row[i];
      out << "\n";
    }
  }
  std::ofstream out(fs::path(outdir) / "summary.json");
  if (!out) throw Error("cannot write summary.json in " + outdir);
  out << doc.summary_json;
}

int classify_exit(const std::exception& e) {
  if (dynamic_cast<const ParamError*>(&e)) return 1;
  if (dynamic_cast<const ParseError*>(&e) != nullptr ||
      dynamic_cast<const DataError*>(&e) != nullptr)
    return 2;
  return 3;
}

}  // namespace finscale
