// Command-line front end: one subcommand per analysis stage, shared I/O
// options, numeric results written as deterministic text tables plus a JSON
// summary.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "finscale/error.hpp"
#include "finscale/run.hpp"
#include "finscale/version.hpp"

namespace {

using finscale::RunConfig;

char parse_delimiter(const std::string& d) {
  if (d == "tab" || d == "\\t") return '\t';
  if (d.size() == 1) return d[0];
  throw finscale::ParamError("delimiter must be a single character or 'tab'");
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string& delim, bool needs_input) {
  auto* in = sub->add_option("-i,--input", cfg.input, "price csv (timestamp, price)");
  if (needs_input) in->required();
  sub->add_option("-o,--outdir", cfg.outdir, "output directory")->capture_default_str();
  sub->add_option("--delimiter", delim, "field delimiter (single char or 'tab')")
      ->capture_default_str();
  sub->add_option("--base-interval", cfg.base_interval,
                  "grid step in seconds (0: gcd of timestamp gaps)")
      ->capture_default_str();
}

void add_returns_opts(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("-m,--m", cfg.m, "aggregation factor over the base grid")
      ->capture_default_str();
  sub->add_flag("--overlap", cfg.overlap, "stride 1 instead of stride m");
  sub->add_option("--session-gap-factor", cfg.session_gap_factor,
                  "drop returns spanning gaps > factor * base interval (0: keep all)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-scale statistics of financial return series"};
  app.set_version_flag("--version", std::string("finscale ") + finscale::kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string delim = ",";
  std::string model = "student_t";
  std::uint64_t seed = 1;
  std::string systematics = "on";
  std::vector<int> fit_range;
  std::vector<double> grid;
  double single_q = 2.0;

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic price series");
  add_common(synth, cfg, delim, false);
  synth->add_option("--model", model, "gaussian | student_t | fbm | vol_cluster | sde")
      ->capture_default_str();
  synth->add_option("-n,--n", cfg.synth.n, "number of returns")->capture_default_str();
  synth->add_option("--seed", seed, "rng seed")->capture_default_str();
  synth->add_option("--nu", cfg.synth.nu, "t tail index (student_t, sde case 3)")
      ->capture_default_str();
  synth->add_option("--hurst", cfg.synth.hurst, "fbm exponent in (0,1)")->capture_default_str();
  synth->add_option("--phi", cfg.synth.phi, "vol_cluster log-vol persistence")
      ->capture_default_str();
  synth->add_option("--sigma-v", cfg.synth.sigma_v, "vol_cluster log-vol scale")
      ->capture_default_str();
  synth->add_option("--sde-case", cfg.synth.sde_case, "drift/diffusion pair 1|2|3")
      ->capture_default_str();
  synth->add_option("--D", cfg.synth.D, "sde noise variance scale")->capture_default_str();
  synth->add_option("--lambda", cfg.synth.lambda, "sde case-2 drift strength")
      ->capture_default_str();
  synth->add_option("--dt", cfg.synth.dt, "sde step size")->capture_default_str();
  synth->add_option("--burn-in", cfg.synth.burn_in, "sde steps discarded up front")
      ->capture_default_str();
  synth->add_option("--scale", cfg.synth_scale, "log-price units per synthetic return")
      ->capture_default_str();

  // returns
  auto* returns = app.add_subcommand("returns", "log-returns at one time scale");
  add_common(returns, cfg, delim, true);
  add_returns_opts(returns, cfg);
  returns->add_flag("--normalize", cfg.normalize_output, "standardize the output values");

  // distfit
  auto* distfit = app.add_subcommand("distfit", "tail family fits across time scales");
  add_common(distfit, cfg, delim, true);
  add_returns_opts(distfit, cfg);
  distfit->add_option("--scales", cfg.scales, "aggregation factors")
      ->delimiter(',')
      ->capture_default_str();
  distfit->add_option("--hill-fraction", cfg.hill_fraction, "order-statistics fraction")
      ->capture_default_str();
  distfit->add_option("--grid", grid, "histogram bin width and half-range in sigmas (w,r)")
      ->delimiter(',')
      ->expected(2);

  // facmom
  auto* facmom = app.add_subcommand("facmom", "factorial moments of return signs");
  add_common(facmom, cfg, delim, true);
  add_returns_opts(facmom, cfg);
  facmom->add_option("--window", cfg.window, "returns per event window")->capture_default_str();
  facmom->add_option("--bins", cfg.bins, "bin counts (each must divide the window)")
      ->delimiter(',')
      ->capture_default_str();
  facmom->add_option("--offsets", cfg.offsets, "window offsets for the systematic shift")
      ->delimiter(',')
      ->capture_default_str();
  facmom->add_option("--kinds", cfg.kinds, "sign species: pp | mm | pm | plain")
      ->delimiter(',')
      ->capture_default_str();

  // gaps
  auto* gaps = app.add_subcommand("gaps", "same-sign run-length law");
  add_common(gaps, cfg, delim, true);
  add_returns_opts(gaps, cfg);
  gaps->add_option("--direction", cfg.gap_direction, "negative | positive | both")
      ->capture_default_str();
  gaps->add_option("--fit-range", fit_range, "gap lengths used in the fit (min,max; max 0 = auto)")
      ->delimiter(',')
      ->expected(2);

  // hurst
  auto* hurst = app.add_subcommand("hurst", "structure-function scaling exponents");
  add_common(hurst, cfg, delim, true);
  add_returns_opts(hurst, cfg);
  hurst->add_option("--taus", cfg.taus, "lags (default: powers of 2 up to n/8)")->delimiter(',');
  hurst->add_option("--qs", cfg.hurst_qs, "moment orders")->delimiter(',')->capture_default_str();
  auto* hurst_q = hurst->add_option("-q,--q", single_q, "single moment order (overrides --qs)");
  hurst->add_option("--systematics", systematics, "variant error protocol: on | off")
      ->capture_default_str();

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "all analyses on one input");
  add_common(pipeline, cfg, delim, true);
  add_returns_opts(pipeline, cfg);
  pipeline->add_option("--scales", cfg.scales, "aggregation factors")->delimiter(',');
  pipeline->add_option("--hill-fraction", cfg.hill_fraction, "order-statistics fraction");
  pipeline->add_option("--grid", grid, "histogram bin width and half-range (w,r)")
      ->delimiter(',')
      ->expected(2);
  pipeline->add_option("--window", cfg.window, "returns per event window");
  pipeline->add_option("--bins", cfg.bins, "bin counts")->delimiter(',');
  pipeline->add_option("--offsets", cfg.offsets, "window offsets")->delimiter(',');
  pipeline->add_option("--kinds", cfg.kinds, "sign species: pp | mm | pm | plain")->delimiter(',');
  pipeline->add_option("--direction", cfg.gap_direction, "negative | positive | both");
  pipeline->add_option("--fit-range", fit_range, "gap lengths used in the fit (min,max)")
      ->delimiter(',')
      ->expected(2);
  pipeline->add_option("--taus", cfg.taus, "lags")->delimiter(',');
  pipeline->add_option("--qs", cfg.hurst_qs, "moment orders")->delimiter(',');
  pipeline->add_option("--systematics", systematics, "variant error protocol: on | off")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // --help / --version exit clean; bad usage is 1
  }

  try {
    if (app.got_subcommand(synth)) {
      cfg.cmd = RunConfig::Cmd::kSynth;
      static const std::map<std::string, finscale::Model> kModels = {
          {"gaussian", finscale::Model::kGaussianIid},
          {"student_t", finscale::Model::kStudentTIid},
          {"fbm", finscale::Model::kFbm},
          {"vol_cluster", finscale::Model::kVolCluster},
          {"sde", finscale::Model::kSde}};
      const auto it = kModels.find(model);
      if (it == kModels.end()) throw finscale::ParamError("unknown model: " + model);
      cfg.synth.model = it->second;
      cfg.synth.seed = seed;
    } else if (app.got_subcommand(returns)) {
      cfg.cmd = RunConfig::Cmd::kReturns;
    } else if (app.got_subcommand(distfit)) {
      cfg.cmd = RunConfig::Cmd::kDistFit;
    } else if (app.got_subcommand(facmom)) {
      cfg.cmd = RunConfig::Cmd::kFacMom;
    } else if (app.got_subcommand(gaps)) {
      cfg.cmd = RunConfig::Cmd::kGaps;
    } else if (app.got_subcommand(hurst)) {
      cfg.cmd = RunConfig::Cmd::kHurst;
    } else {
      cfg.cmd = RunConfig::Cmd::kPipeline;
    }
    cfg.delimiter = parse_delimiter(delim);
    if (systematics == "on")
      cfg.systematics = true;
    else if (systematics == "off")
      cfg.systematics = false;
    else
      throw finscale::ParamError("--systematics expects on or off");
    if (fit_range.size() == 2) {
      cfg.gap_fit_min = fit_range[0];
      cfg.gap_fit_max = fit_range[1];
    }
    if (grid.size() == 2) {
      cfg.hist_width = grid[0];
      cfg.hist_range = grid[1];
    }
    if (hurst_q->count() > 0) cfg.hurst_qs = {single_q};

    const finscale::ResultDocument doc = finscale::run(cfg);
    finscale::write_document(doc, cfg.outdir);
    std::cout << doc.command << ": " << doc.tables.size() << " table(s) + summary.json -> "
              << cfg.outdir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return finscale::classify_exit(e);
  }
}
