#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pplnhom/biphoton.hpp"
#include "pplnhom/detection.hpp"
#include "pplnhom/hom.hpp"
#include "pplnhom/qpm.hpp"

namespace pplnhom {

struct SourceSettings {
  double pair_rate_hz = 1.5e7;
  double pump_power_mw = 0.4;
  double bandwidth_nm = 0.7;  // linewidth used for the brightness normalization
  // Measured rates the arm coupling is fitted to.
  double target_singles_hz = 1e5;
  double target_coincidences_hz = 330.0;
};

struct HomBench {
  IndistinguishabilitySettings indistinguishability{0.85, 5.5};
  double half_range_m = 10e-3;
  double step_m = 5e-6;
  double integration_s = 5.0;
  std::vector<double> temperatures_c{72.0};
};

struct TuningSettings {
  double temperature_from_c = 69.0;
  double temperature_to_c = 73.0;
  double temperature_step_c = 0.1;
  std::vector<double> poling_periods_m{6.50e-6, 6.55e-6, 6.60e-6, 6.65e-6};
  double poling_temperature_c = 70.0;
};

struct MonteCarloSettings {
  double duration_s = 100.0;
  double accidental_delay_s = 1e-6;
};

struct RunConfig {
  std::optional<std::filesystem::path> material_file;  // nullopt: built-in coefficients
  WaveguideSpec waveguide;
  CalibrationTarget calibration;
  double offset_bound = 0.05;
  GridOptions grid;
  DetectorSpec detector_a;
  DetectorSpec detector_b;
  ChannelLosses losses;
  SourceSettings source;
  HomBench hom;
  TuningSettings tuning;
  MonteCarloSettings monte_carlo;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;

  void validate() const;
};

/// Built-in configuration: calibrated waveguide, fitted arm coupling.
RunConfig default_run_config();

/// Keys absent from the text keep their built-in values. Unknown keys are errors.
RunConfig parse_run_config(std::string_view yaml, std::string_view origin = "<config>",
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical YAML; parsing it back reproduces c up to unit-conversion rounding.
std::string to_yaml(const RunConfig& config);

/// FNV-1a over the canonical YAML (output_dir excluded) and the material coefficients.
std::string config_hash(const RunConfig& config);

}  // namespace pplnhom
