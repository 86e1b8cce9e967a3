#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pplnhom/biphoton.hpp"
#include "pplnhom/detection.hpp"
#include "pplnhom/hom.hpp"
#include "pplnhom/qpm.hpp"

namespace pplnhom {

inline constexpr std::string_view kToolVersion = "pplnhom 0.1.0";

/// Provenance block written at the top of every output file.
struct OutputHeader {
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> fields;
};

/// 15 significant digits, trailing zeros trimmed; "nan" for NaN.
std::string format_number(double value);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

void write_header(std::ostream& out, const OutputHeader& header);

void write_tuning_csv(std::ostream& out, const TuningCurve& curve, const OutputHeader& header);
std::string tuning_json(const TuningCurve& curve, const OutputHeader& header);

/// delta_omega_rad_s, re_phi, im_phi with centre detuning, pump frequency and tau in the header.
void write_state_csv(std::ostream& out, const TwoPhotonState& state, const OutputHeader& header);

struct SpectrumRow {
  double poling_period_m;
  double temperature_c;
  Polarization branch;
  double wavelength_m;
  double density_per_nm;
};
void write_spectrum_csv(std::ostream& out, std::span<const SpectrumRow> rows,
                        const OutputHeader& header);
std::string spectrum_json(std::span<const SpectrumRow> rows, const OutputHeader& header);

void write_hom_csv(std::ostream& out, const HomScan& scan, const OutputHeader& header);

struct HomSummary {
  double temperature_c = 0.0;
  double center_detuning_rad_per_s = 0.0;
  double psi_minus_overlap = 0.0;  // at the walk-off compensation point
  double bump_peak = 0.0;
  std::optional<DipMetrics> metrics;
  std::string metrics_error;
  std::optional<double> oscillation_period_m;
};
std::string hom_sidecar_json(const HomScan& scan, const HomSummary& summary,
                             const OutputHeader& header);
std::string hom_scan_json(const HomScan& scan, const HomSummary& summary,
                          const OutputHeader& header);

std::string rate_report_json(const RateReport& report, const OutputHeader& header);
void write_rate_report_csv(std::ostream& out, const RateReport& report,
                           const OutputHeader& header);

void write_events_csv(std::ostream& out, std::span<const DetectionEvent> events,
                      const OutputHeader& header);

}  // namespace pplnhom
