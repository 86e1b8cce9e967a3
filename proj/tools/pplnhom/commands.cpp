#include "pplnhom/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pplnhom/constants.hpp"
#include "pplnhom/errors.hpp"
#include "pplnhom/io.hpp"

namespace pplnhom::cli {

namespace fs = std::filesystem;

namespace {

std::ostream& log(const Context& ctx) {
  static std::ostream discard(nullptr);
  return ctx.log ? *ctx.log : discard;
}

OutputHeader header_for(const Context& ctx, std::string command,
                        std::vector<std::pair<std::string, std::string>> fields = {}) {
  OutputHeader h;
  h.config_hash = config_hash(ctx.config);
  h.fields.emplace_back("command", std::move(command));
  for (auto& f : fields) h.fields.push_back(std::move(f));
  return h;
}

fs::path output_path(const Context& ctx, const std::string& name) {
  fs::create_directories(ctx.config.output_dir);
  return ctx.config.output_dir / name;
}

template <typename Writer>
fs::path write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path;
}

std::vector<double> expand_range(double from, double to, double step) {
  if (!(step > 0.0)) throw UsageError("range step must be positive");
  if (!(to >= from)) throw UsageError("empty range: --to must not be below --from");
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  // Index-based to avoid drift; trimmed to 12 significant digits so 69 + 3 * 0.1 prints as 69.3.
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", from + static_cast<double>(i) * step);
    out[i] = std::strtod(buf, nullptr);
  }
  return out;
}

std::string temperature_tag(double t) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << t;
  return s.str();
}

// Density per nm for one branch around its phase-matched wavelength.
void branch_spectrum(const WaveguideSpec& spec, const PhaseMatchPoint& center,
                     const PhaseMatchBandwidth& bw, Polarization branch,
                     const SpectrumRequest& req, std::vector<SpectrumRow>& rows) {
  const double omega_half = 0.5 * angular_frequency(spec.pump_wavelength_m);
  const double lambda0 = branch == Polarization::kH ? center.lambda_h_m : center.lambda_v_m;
  const double half = req.half_width_fwhm * bw.fwhm_wavelength_m;
  const int n = std::max(req.points, 3);
  std::vector<double> lambda(n), density(n);
  for (int i = 0; i < n; ++i) {
    lambda[i] = lambda0 - half + 2.0 * half * i / (n - 1);
    const double omega = angular_frequency(lambda[i]);
    const double d = branch == Polarization::kH ? omega - omega_half : omega_half - omega;
    density[i] = std::norm(pm_amplitude(spec, d));
  }
  double area = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    area += 0.5 * (density[i] + density[i + 1]) * (lambda[i + 1] - lambda[i]) / kNanometre;
  for (int i = 0; i < n; ++i) {
    rows.push_back({spec.poling_period_m, spec.temperature_c, branch, lambda[i],
                    density[i] / area});
  }
}

}  // namespace

std::vector<fs::path> cmd_tuning_curve(const Context& ctx, const TuningRequest& req) {
  const auto& cfg = ctx.config;
  const bool temperature = req.mode == TuningRequest::Mode::kTemperature;
  std::vector<double> values = req.values;
  if (values.empty()) {
    if (req.from || req.to || req.step) {
      if (!(req.from && req.to && req.step))
        throw UsageError("--from, --to and --step must be given together");
      values = expand_range(*req.from, *req.to, *req.step);
    } else if (temperature) {
      values = expand_range(cfg.tuning.temperature_from_c, cfg.tuning.temperature_to_c,
                            cfg.tuning.temperature_step_c);
    } else {
      for (double p : cfg.tuning.poling_periods_m) values.push_back(p / kMicrometre);
    }
  }
  if (values.empty()) throw UsageError("empty tuning range");

  WaveguideSpec spec = cfg.waveguide;
  TuningCurve curve;
  if (temperature) {
    curve = temperature_tuning_curve(spec, values);
  } else {
    spec.temperature_c = req.at_temperature_c.value_or(cfg.tuning.poling_temperature_c);
    for (double& v : values) v *= kMicrometre;
    curve = poling_tuning_curve(spec, values);
  }

  const auto header = header_for(
      ctx, "tuning-curve",
      {{"mode", temperature ? "temperature" : "poling"},
       {"fixed", temperature ? "Lambda_um=" + format_number(spec.poling_period_m / kMicrometre)
                             : "T_C=" + format_number(spec.temperature_c)}});
  const std::string stem = temperature ? "tuning_temperature" : "tuning_poling";
  fs::path path;
  if (ctx.format == Format::kJson) {
    path = write_file(output_path(ctx, stem + ".json"),
                      [&](std::ostream& o) { o << tuning_json(curve, header); });
  } else {
    path = write_file(output_path(ctx, stem + ".csv"),
                      [&](std::ostream& o) { write_tuning_csv(o, curve, header); });
  }
  std::size_t missing = 0;
  for (const auto& s : curve.samples) missing += s.point ? 0 : 1;
  log(ctx) << "tuning-curve: " << curve.samples.size() << " points (" << missing
           << " without a phase-matched pair) -> " << path.string() << "\n";
  if (curve.degeneracy_parameter) {
    log(ctx) << "  degeneracy at "
             << (temperature ? format_number(*curve.degeneracy_parameter) + " C"
                             : format_number(*curve.degeneracy_parameter / kMicrometre) + " um")
             << "\n";
  }
  return {path};
}

std::vector<fs::path> cmd_spectrum(const Context& ctx, const SpectrumRequest& req) {
  const auto& cfg = ctx.config;
  std::vector<double> periods = req.poling_periods_um;
  std::vector<double> temps = req.temperatures_c;
  if (periods.empty()) periods.push_back(cfg.waveguide.poling_period_m / kMicrometre);
  if (temps.empty()) temps.push_back(cfg.waveguide.temperature_c);
  if (req.points < 3) throw UsageError("--points must be at least 3");

  std::vector<SpectrumRow> rows;
  std::vector<std::string> skipped;
  for (double period_um : periods) {
    for (double t : temps) {
      WaveguideSpec spec = cfg.waveguide;
      spec.poling_period_m = period_um * kMicrometre;
      spec.temperature_c = t;
      const auto center = solve_pair(spec);
      if (!center) {
        skipped.push_back("Lambda_um=" + format_number(period_um) + " T_C=" + format_number(t));
        continue;
      }
      const auto bw = pm_bandwidth(spec);
      branch_spectrum(spec, *center, bw, Polarization::kH, req, rows);
      branch_spectrum(spec, *center, bw, Polarization::kV, req, rows);
      log(ctx) << "spectrum: Lambda " << format_number(period_um) << " um, T " << format_number(t)
               << " C: H " << format_number(center->lambda_h_m / kNanometre) << " nm, V "
               << format_number(center->lambda_v_m / kNanometre) << " nm, FWHM "
               << format_number(bw.fwhm_wavelength_m / kNanometre) << " nm\n";
    }
  }
  std::vector<std::pair<std::string, std::string>> fields;
  for (const auto& s : skipped) fields.emplace_back("no_phase_matched_pair", s);
  const auto header = header_for(ctx, "spectrum", fields);
  fs::path path;
  if (ctx.format == Format::kJson) {
    path = write_file(output_path(ctx, "spectrum.json"),
                      [&](std::ostream& o) { o << spectrum_json(rows, header); });
  } else {
    path = write_file(output_path(ctx, "spectrum.csv"),
                      [&](std::ostream& o) { write_spectrum_csv(o, rows, header); });
  }
  log(ctx) << "spectrum -> " << path.string() << "\n";
  return {path};
}

std::vector<fs::path> cmd_hom_scan(const Context& ctx, const HomRequest& req) {
  const auto& cfg = ctx.config;
  if (!cfg.waveguide.calibrated)
    throw DomainError("hom-scan: waveguide is not calibrated; run 'pplnhom calibrate' first");
  auto temps = req.temperatures_c.empty() ? cfg.hom.temperatures_c : req.temperatures_c;
  if (temps.empty()) throw UsageError("no scan temperatures given");
  IndistinguishabilitySettings settings = cfg.hom.indistinguishability;
  if (req.mode_overlap) settings.mode_overlap = *req.mode_overlap;
  settings.validate();
  const double half = req.half_range_mm ? *req.half_range_mm * kMillimetre : cfg.hom.half_range_m;
  const double step = req.step_um ? *req.step_um * kMicrometre : cfg.hom.step_m;
  if (!(half > 0.0 && step > 0.0)) throw UsageError("scan range and step must be positive");

  // Counts: far-delay coincidences through the bench, dark-dominated accidentals.
  const auto rates = analytic_rates(cfg.source.pair_rate_hz, cfg.losses, cfg.detector_a,
                                    cfg.detector_b);
  const double far_rate = rates.coincidences * settings.transmission();
  const double acc_rate =
      accidental_rate(cfg.detector_a.dark_rate_hz, cfg.detector_b.dark_rate_hz,
                      std::max(cfg.detector_a.coincidence_window_s,
                               cfg.detector_b.coincidence_window_s));

  std::vector<fs::path> written;
  std::ostringstream series;
  series << "T_C,center_detuning_rad_per_s,visibility,fwhm_mm,center_mm,bump_peak,"
            "psi_minus_overlap,oscillation_period_mm\n";
  for (double t : temps) {
    WaveguideSpec spec = cfg.waveguide;
    spec.temperature_c = t;
    const auto state = build_state(spec, cfg.grid);
    auto scan = scan_around_compensation(state, half, step, settings);
    convert_to_counts(scan, far_rate, acc_rate, cfg.hom.integration_s);

    HomSummary summary;
    summary.temperature_c = t;
    summary.center_detuning_rad_per_s = state.amplitude.center_detuning();
    summary.psi_minus_overlap =
        psi_minus_overlap(apply_delay(state, state.arrival_offset_s * kSpeedOfLight));
    summary.bump_peak = *std::max_element(scan.bump.begin(), scan.bump.end());
    try {
      summary.metrics = dip_metrics(scan);
    } catch (const DomainError& e) {
      summary.metrics_error = e.what();
    }
    summary.oscillation_period_m = oscillation_period(scan);

    const auto header = header_for(ctx, "hom-scan",
                                   {{"T_C", format_number(t)},
                                    {"mode_overlap", format_number(settings.mode_overlap)}});
    const std::string stem = "hom_T" + temperature_tag(t);
    if (ctx.format == Format::kJson) {
      written.push_back(write_file(output_path(ctx, stem + ".json"), [&](std::ostream& o) {
        o << hom_scan_json(scan, summary, header);
      }));
    } else {
      written.push_back(write_file(output_path(ctx, stem + ".csv"),
                                   [&](std::ostream& o) { write_hom_csv(o, scan, header); }));
      written.push_back(write_file(output_path(ctx, stem + ".metrics.json"), [&](std::ostream& o) {
        o << hom_sidecar_json(scan, summary, header);
      }));
    }
    if (req.dump_state) {
      written.push_back(write_file(output_path(ctx, "state_T" + temperature_tag(t) + ".csv"),
                                   [&](std::ostream& o) { write_state_csv(o, state, header); }));
    }

    auto num = [](std::optional<double> v) { return v ? format_number(*v) : std::string("nan"); };
    const auto& m = summary.metrics;
    series << format_number(t) << "," << format_number(summary.center_detuning_rad_per_s) << ","
           << num(m ? std::optional(m->visibility) : std::nullopt) << ","
           << num(m ? std::optional(m->fwhm_m / kMillimetre) : std::nullopt) << ","
           << num(m ? std::optional(m->center_m / kMillimetre) : std::nullopt) << ","
           << format_number(summary.bump_peak) << "," << format_number(summary.psi_minus_overlap)
           << ","
           << num(summary.oscillation_period_m
                      ? std::optional(*summary.oscillation_period_m / kMillimetre)
                      : std::nullopt)
           << "\n";
    log(ctx) << "hom-scan T " << format_number(t) << " C: visibility "
             << (m ? format_number(m->visibility) : "n/a") << ", FWHM "
             << (m ? format_number(m->fwhm_m / kMillimetre) + " mm" : summary.metrics_error)
             << ", bump peak " << format_number(summary.bump_peak) << "\n";
  }
  written.push_back(write_file(output_path(ctx, "hom_series.csv"), [&](std::ostream& o) {
    write_header(o, header_for(ctx, "hom-scan"));
    o << series.str();
  }));
  return written;
}

std::vector<fs::path> cmd_rates(const Context& ctx, const RatesRequest& req) {
  const auto& cfg = ctx.config;
  RateReport report;
  std::vector<DetectionEvent> events;
  const bool mc = req.mode == RatesRequest::Mode::kMonteCarlo;
  if (mc) {
    MonteCarloOptions opt;
    opt.duration_s = req.duration_s.value_or(cfg.monte_carlo.duration_s);
    if (!(opt.duration_s > 0.0)) throw UsageError("--duration must be positive");
    opt.seed = cfg.seed;
    opt.accidental_delay_s = cfg.monte_carlo.accidental_delay_s;
    opt.record_events = req.dump_events;
    auto result =
        monte_carlo(cfg.source.pair_rate_hz, cfg.losses, cfg.detector_a, cfg.detector_b, opt);
    report = result.report;
    events = std::move(result.events);
  } else {
    report = analytic_rates(cfg.source.pair_rate_hz, cfg.losses, cfg.detector_a, cfg.detector_b);
  }
  if (report.pair_rate) {
    const double dnu_ghz =
        bandwidth_to_frequency(cfg.source.bandwidth_nm * kNanometre,
                               cfg.waveguide.degenerate_wavelength_m()) / 1e9;
    report.brightness = normalized_brightness(*report.pair_rate, cfg.source.pump_power_mw, dnu_ghz);
  }

  std::vector<fs::path> written;
  const auto header = header_for(ctx, "rates", {{"mode", mc ? "monte_carlo" : "analytic"}});
  if (ctx.format == Format::kCsv) {
    written.push_back(write_file(output_path(ctx, "rates.csv"),
                                 [&](std::ostream& o) { write_rate_report_csv(o, report, header); }));
  } else {
    written.push_back(write_file(output_path(ctx, "rates.json"),
                                 [&](std::ostream& o) { o << rate_report_json(report, header); }));
  }
  if (mc && req.dump_events) {
    written.push_back(write_file(output_path(ctx, "events.csv"),
                                 [&](std::ostream& o) { write_events_csv(o, events, header); }));
  }
  log(ctx) << "rates (" << (mc ? "monte carlo" : "analytic") << "): S_a "
           << format_number(report.singles_a) << " /s, S_b " << format_number(report.singles_b)
           << " /s, R_c " << format_number(report.coincidences) << " /s, R_acc "
           << format_number(report.accidentals) << " /s\n";
  if (!report.pair_rate) throw DomainError("rates: " + report.estimator_error);
  log(ctx) << "  N " << format_number(*report.pair_rate) << " /s, brightness "
           << format_number(*report.brightness) << " /s/GHz/mW, N*tau_w "
           << format_number(report.multi_pair_occupancy) << "\n";
  return written;
}

std::vector<fs::path> cmd_calibrate(const Context& ctx, const CalibrateRequest& req) {
  RunConfig cfg = ctx.config;
  const auto report = calibrate(cfg.waveguide, cfg.calibration, cfg.offset_bound);
  auto& out = log(ctx);
  out << "calibrate: uncalibrated mismatch at degeneracy "
      << format_number(report.uncalibrated_mismatch_rad_per_m) << " rad/m";
  if (report.uncalibrated_point) {
    out << ", uncalibrated lambda_H - 2 lambda_p "
        << format_number((report.uncalibrated_point->lambda_h_m -
                          cfg.waveguide.degenerate_wavelength_m()) / kNanometre)
        << " nm";
  }
  out << "\n  offsets H " << format_number(report.spec.index_offset_h) << ", V "
      << format_number(report.spec.index_offset_v) << "\n  residual "
      << (report.residual_wavelength_m ? format_number(*report.residual_wavelength_m / kNanometre) + " nm"
                                       : std::string("n/a (no root)"))
      << "\n";
  if (!report.success) throw DomainError("calibration failed: " + report.message);

  cfg.waveguide = report.spec;
  const fs::path path = req.in_place ? *req.in_place : output_path(ctx, "calibrated.yaml");
  write_file(path, [&](std::ostream& o) {
    write_header(o, header_for(ctx, "calibrate"));
    o << to_yaml(cfg);
  });
  out << "  wrote " << path.string() << "\n";
  return {path};
}

}  // namespace pplnhom::cli
