#include "pplnhom/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "pplnhom/constants.hpp"

namespace pplnhom {

namespace {

using Json = nlohmann::ordered_json;

Json header_json(const OutputHeader& header) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = header.config_hash;
  for (const auto& [k, v] : header.fields) j[k] = v;
  return j;
}

Json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? Json(*v) : Json(nullptr);
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[i] = digits[value & 0xf];
  return out;
}

void write_header(std::ostream& out, const OutputHeader& header) {
  out << "# tool_version: " << kToolVersion << "\n";
  out << "# config_hash: " << header.config_hash << "\n";
  for (const auto& [k, v] : header.fields) out << "# " << k << ": " << v << "\n";
}

void write_tuning_csv(std::ostream& out, const TuningCurve& curve, const OutputHeader& header) {
  write_header(out, header);
  if (curve.degeneracy_parameter) {
    const double p = *curve.degeneracy_parameter;
    out << "# degeneracy_"
        << (curve.axis == TuningCurve::Axis::kTemperature ? "T_C: " + format_number(p)
                                                           : "Lambda_um: " +
                                                                 format_number(p / kMicrometre))
        << "\n";
  }
  out << (curve.axis == TuningCurve::Axis::kTemperature ? "T_C" : "Lambda_um")
      << ",lambda_H_nm,lambda_V_nm,residual_rad_per_m\n";
  for (const auto& s : curve.samples) {
    const double param =
        curve.axis == TuningCurve::Axis::kTemperature ? s.parameter : s.parameter / kMicrometre;
    out << format_number(param) << ",";
    if (s.point) {
      out << format_number(s.point->lambda_h_m / kNanometre) << ","
          << format_number(s.point->lambda_v_m / kNanometre) << ","
          << format_number(s.point->residual_rad_per_m) << "\n";
    } else {
      out << "nan,nan,nan\n";  // no phase-matched pair in the bracket
    }
  }
}

std::string tuning_json(const TuningCurve& curve, const OutputHeader& header) {
  Json j = header_json(header);
  const bool temp = curve.axis == TuningCurve::Axis::kTemperature;
  j["axis"] = temp ? "temperature" : "poling_period";
  if (curve.degeneracy_parameter)
    j["degeneracy"] = temp ? *curve.degeneracy_parameter
                           : *curve.degeneracy_parameter / kMicrometre;
  else
    j["degeneracy"] = nullptr;
  Json rows = Json::array();
  for (const auto& s : curve.samples) {
    Json r;
    r[temp ? "T_C" : "Lambda_um"] = temp ? s.parameter : s.parameter / kMicrometre;
    if (s.point) {
      r["lambda_H_nm"] = s.point->lambda_h_m / kNanometre;
      r["lambda_V_nm"] = s.point->lambda_v_m / kNanometre;
      r["residual_rad_per_m"] = s.point->residual_rad_per_m;
      r["degenerate"] = s.point->degenerate;
    } else {
      r["lambda_H_nm"] = nullptr;
      r["lambda_V_nm"] = nullptr;
      r["residual_rad_per_m"] = nullptr;
      r["degenerate"] = nullptr;
    }
    rows.push_back(std::move(r));
  }
  j["samples"] = std::move(rows);
  return dump(j);
}

void write_state_csv(std::ostream& out, const TwoPhotonState& state,
                     const OutputHeader& header) {
  write_header(out, header);
  const auto& a = state.amplitude;
  out << "# center_detuning_rad_per_s: " << format_number(a.center_detuning()) << "\n";
  out << "# pump_angular_frequency_rad_per_s: " << format_number(state.pump_angular_frequency)
      << "\n";
  out << "# arrival_offset_s: " << format_number(state.arrival_offset_s) << "\n";
  out << "delta_omega_rad_s,re_phi,im_phi\n";
  for (std::size_t k = 0; k < a.size(); ++k) {
    out << format_number(a.detuning(k)) << "," << format_number(a[k].real()) << ","
        << format_number(a[k].imag()) << "\n";
  }
}

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumRow> rows,
                        const OutputHeader& header) {
  write_header(out, header);
  out << "Lambda_um,T_C,branch,lambda_nm,density_per_nm\n";
  for (const auto& r : rows) {
    out << format_number(r.poling_period_m / kMicrometre) << ","
        << format_number(r.temperature_c) << "," << to_string(r.branch) << ","
        << format_number(r.wavelength_m / kNanometre) << "," << format_number(r.density_per_nm)
        << "\n";
  }
}

std::string spectrum_json(std::span<const SpectrumRow> rows, const OutputHeader& header) {
  Json j = header_json(header);
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"Lambda_um", r.poling_period_m / kMicrometre},
                   {"T_C", r.temperature_c},
                   {"branch", std::string(to_string(r.branch))},
                   {"lambda_nm", r.wavelength_m / kNanometre},
                   {"density_per_nm", r.density_per_nm}});
  }
  j["rows"] = std::move(arr);
  return dump(j);
}

void write_hom_csv(std::ostream& out, const HomScan& scan, const OutputHeader& header) {
  write_header(out, header);
  const bool counts = !scan.counts.empty();
  if (counts) out << "# integration_s: " << format_number(scan.integration_s) << "\n";
  out << "delta_x_mm,P_c,bump,dip" << (counts ? ",counts" : "") << "\n";
  for (std::size_t i = 0; i < scan.delta_x_m.size(); ++i) {
    out << format_number(scan.delta_x_m[i] / kMillimetre) << ","
        << format_number(scan.coincidence_probability[i]) << "," << format_number(scan.bump[i])
        << "," << format_number(scan.dip[i]);
    if (counts) out << "," << format_number(scan.counts[i]);
    out << "\n";
  }
}

namespace {

Json hom_summary_json(const HomScan& scan, const HomSummary& s) {
  Json j;
  j["temperature_c"] = s.temperature_c;
  j["center_detuning_rad_per_s"] = s.center_detuning_rad_per_s;
  if (s.metrics) {
    j["visibility"] = number_or_null(s.metrics->visibility);
    j["fwhm_mm"] = number_or_null(s.metrics->fwhm_m / kMillimetre);
    j["center_mm"] = number_or_null(s.metrics->center_m / kMillimetre);
    j["baseline"] = number_or_null(s.metrics->baseline);
    j["minimum"] = number_or_null(s.metrics->minimum);
  } else {
    j["visibility"] = nullptr;
    j["fwhm_mm"] = nullptr;
    j["center_mm"] = nullptr;
    j["metrics_error"] = s.metrics_error;
  }
  j["bump_peak"] = s.bump_peak;
  j["psi_minus_overlap_at_compensation"] = s.psi_minus_overlap;
  j["oscillation_period_mm"] =
      s.oscillation_period_m ? Json(*s.oscillation_period_m / kMillimetre) : Json(nullptr);
  j["settings"] = {{"mode_overlap", scan.settings.mode_overlap},
                   {"interferometer_loss_db", scan.settings.interferometer_loss_db},
                   {"delta_x_start_mm", scan.delta_x_m.empty() ? 0.0 : scan.delta_x_m.front() /
                                                                         kMillimetre},
                   {"delta_x_stop_mm", scan.delta_x_m.empty() ? 0.0 : scan.delta_x_m.back() /
                                                                        kMillimetre},
                   {"samples", scan.delta_x_m.size()}};
  return j;
}

}  // namespace

std::string hom_sidecar_json(const HomScan& scan, const HomSummary& summary,
                             const OutputHeader& header) {
  Json j = header_json(header);
  j.update(hom_summary_json(scan, summary));
  return dump(j);
}

std::string hom_scan_json(const HomScan& scan, const HomSummary& summary,
                          const OutputHeader& header) {
  Json j = header_json(header);
  j.update(hom_summary_json(scan, summary));
  Json mm = Json::array();
  for (double x : scan.delta_x_m) mm.push_back(x / kMillimetre);
  j["delta_x_mm"] = std::move(mm);
  j["P_c"] = scan.coincidence_probability;
  j["bump"] = scan.bump;
  j["dip"] = scan.dip;
  if (!scan.counts.empty()) j["counts"] = scan.counts;
  return dump(j);
}

std::string rate_report_json(const RateReport& r, const OutputHeader& header) {
  Json j = header_json(header);
  j["mode"] = r.uncertainty ? "monte_carlo" : "analytic";
  j["singles_a_hz"] = r.singles_a;
  j["singles_b_hz"] = r.singles_b;
  j["coincidences_hz"] = r.coincidences;
  j["accidentals_hz"] = r.accidentals;
  j["raw_coincidences_hz"] = r.raw_coincidences;
  j["pair_rate_hz"] = optional_number(r.pair_rate);
  j["pair_rate_uncorrected_hz"] = optional_number(r.pair_rate_uncorrected);
  if (!r.estimator_error.empty()) j["estimator_error"] = r.estimator_error;
  j["brightness_per_s_ghz_mw"] = optional_number(r.brightness);
  j["multi_pair_occupancy"] = r.multi_pair_occupancy;
  if (r.uncertainty) {
    const auto& u = *r.uncertainty;
    j["uncertainty"] = {{"singles_a_hz", u.singles_a},
                        {"singles_b_hz", u.singles_b},
                        {"coincidences_hz", u.coincidences},
                        {"accidentals_hz", u.accidentals},
                        {"pair_rate_hz", u.pair_rate}};
    j["duration_s"] = r.duration_s;
    j["seed"] = r.seed;
  }
  return dump(j);
}

void write_rate_report_csv(std::ostream& out, const RateReport& r, const OutputHeader& header) {
  write_header(out, header);
  out << "quantity,value,uncertainty\n";
  auto row = [&](const char* name, std::optional<double> v, std::optional<double> u) {
    out << name << "," << (v ? format_number(*v) : "nan") << ","
        << (u ? format_number(*u) : "") << "\n";
  };
  const auto& u = r.uncertainty;
  row("singles_a_hz", r.singles_a, u ? std::optional(u->singles_a) : std::nullopt);
  row("singles_b_hz", r.singles_b, u ? std::optional(u->singles_b) : std::nullopt);
  row("coincidences_hz", r.coincidences, u ? std::optional(u->coincidences) : std::nullopt);
  row("accidentals_hz", r.accidentals, u ? std::optional(u->accidentals) : std::nullopt);
  row("raw_coincidences_hz", r.raw_coincidences, std::nullopt);
  row("pair_rate_hz", r.pair_rate, u ? std::optional(u->pair_rate) : std::nullopt);
  row("pair_rate_uncorrected_hz", r.pair_rate_uncorrected, std::nullopt);
  row("brightness_per_s_ghz_mw", r.brightness, std::nullopt);
  row("multi_pair_occupancy", r.multi_pair_occupancy, std::nullopt);
}

void write_events_csv(std::ostream& out, std::span<const DetectionEvent> events,
                      const OutputHeader& header) {
  write_header(out, header);
  out << "t_s,channel,origin\n";
  for (const auto& e : events) {
    out << format_number(e.time_s) << "," << (e.channel == DetectionEvent::Channel::kA ? "a" : "b")
        << "," << (e.origin == DetectionEvent::Origin::kPair ? "pair" : "dark") << "\n";
  }
}

}  // namespace pplnhom
