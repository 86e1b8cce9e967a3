#include <CLI11.hpp>

#include <ostream>

#include "pplnhom/commands.hpp"
#include "pplnhom/errors.hpp"

namespace pplnhom::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for a CW-pumped type-II PPLN photon-pair source and its HOM bench",
               "pplnhom"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string format = "csv";
  app.add_option("--config", config_path, "Run configuration (YAML)")->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed for Monte Carlo runs");
  app.add_option("--format", format, "Table output format")
      ->check(CLI::IsMember({"csv", "json"}));

  TuningRequest tuning;
  std::string tuning_mode = "temperature";
  double from = 0, to = 0, step = 0, at_t = 0;
  auto* tc = app.add_subcommand("tuning-curve", "Phase-matched wavelengths vs temperature or poling period");
  tc->add_option("--mode", tuning_mode, "temperature|poling")
      ->check(CLI::IsMember({"temperature", "poling"}));
  auto* from_opt = tc->add_option("--from", from, "Range start (C or um)");
  auto* to_opt = tc->add_option("--to", to, "Range end (C or um)");
  auto* step_opt = tc->add_option("--step", step, "Range step (C or um)");
  tc->add_option("--values", tuning.values, "Explicit values (C or um)")->delimiter(',');
  auto* at_opt = tc->add_option("--at-temperature", at_t, "Temperature for poling mode (C)");

  SpectrumRequest spectrum;
  auto* sp = app.add_subcommand("spectrum", "Phase-matching spectra per branch");
  sp->add_option("--poling-periods", spectrum.poling_periods_um, "Poling periods (um)")
      ->delimiter(',');
  sp->add_option("--temperatures", spectrum.temperatures_c, "Temperatures (C)")->delimiter(',');
  sp->add_option("--points", spectrum.points, "Samples per branch");

  HomRequest hom;
  double half_mm = 0, step_um = 0, gamma = 0;
  auto* hs = app.add_subcommand("hom-scan", "HOM coincidence scan vs path difference");
  hs->add_option("--temperatures", hom.temperatures_c, "Crystal temperatures (C)")
      ->delimiter(',');
  auto* half_opt = hs->add_option("--half-range-mm", half_mm, "Half width of the delay scan");
  auto* step_um_opt = hs->add_option("--step-um", step_um, "Delay step");
  auto* gamma_opt = hs->add_option("--mode-overlap", gamma, "Scalar mode overlap in [0, 1]");
  hs->add_flag("--dump-state", hom.dump_state, "Also write the spectral state as CSV");

  RatesRequest rates;
  std::string rates_mode = "analytic";
  double duration = 0;
  auto* rt = app.add_subcommand("rates", "Singles, coincidences, pair rate and brightness");
  rt->add_option("--mode", rates_mode, "analytic|mc")->check(CLI::IsMember({"analytic", "mc"}));
  auto* duration_opt = rt->add_option("--duration", duration, "Simulated time for mc (s)");
  rt->add_flag("--dump-events", rates.dump_events, "Write the mc event stream as CSV");

  CalibrateRequest cal;
  bool in_place = false;
  auto* cb = app.add_subcommand("calibrate", "Fit index offsets to the degeneracy target");
  cb->add_flag("--in-place", in_place, "Overwrite the --config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    Context ctx;
    ctx.config = config_path.empty() ? default_run_config() : load_run_config(config_path);
    if (*out_opt) ctx.config.output_dir = out_dir;
    if (*seed_opt) ctx.config.seed = seed;
    ctx.format = format == "json" ? Format::kJson : Format::kCsv;
    ctx.log = &out;

    if (tc->parsed()) {
      tuning.mode = tuning_mode == "poling" ? TuningRequest::Mode::kPoling
                                            : TuningRequest::Mode::kTemperature;
      if (*from_opt) tuning.from = from;
      if (*to_opt) tuning.to = to;
      if (*step_opt) tuning.step = step;
      if (*at_opt) tuning.at_temperature_c = at_t;
      cmd_tuning_curve(ctx, tuning);
    } else if (sp->parsed()) {
      cmd_spectrum(ctx, spectrum);
    } else if (hs->parsed()) {
      if (*half_opt) hom.half_range_mm = half_mm;
      if (*step_um_opt) hom.step_um = step_um;
      if (*gamma_opt) hom.mode_overlap = gamma;
      cmd_hom_scan(ctx, hom);
    } else if (rt->parsed()) {
      rates.mode = rates_mode == "mc" ? RatesRequest::Mode::kMonteCarlo
                                      : RatesRequest::Mode::kAnalytic;
      if (*duration_opt) rates.duration_s = duration;
      cmd_rates(ctx, rates);
    } else if (cb->parsed()) {
      if (in_place) {
        if (config_path.empty()) throw UsageError("--in-place needs --config");
        cal.in_place = config_path;
      }
      cmd_calibrate(ctx, cal);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kModelError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kModelError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kModelError;
  }
  return kOk;
}

}  // namespace pplnhom::cli
