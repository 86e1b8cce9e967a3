#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pplnhom/dispersion.hpp"

namespace pplnhom {

/// Device under simulation. Lengths in metres, temperature in Celsius.
struct WaveguideSpec {
  SellmeierModel material = SellmeierModel::congruent_lithium_niobate();
  double length_m = 0.036;
  double poling_period_m = 6.60e-6;
  double temperature_c = 72.0;
  double pump_wavelength_m = 655e-9;
  AxisPolarizationMap axes;
  // Constant effective-index offsets absorbing waveguide dispersion.
  double index_offset_h = 0.0;
  double index_offset_v = 0.0;
  bool calibrated = false;

  void validate() const;

  double index_offset(Polarization pol) const {
    return pol == Polarization::kH ? index_offset_h : index_offset_v;
  }
  double effective_index(Polarization pol, double wavelength_m) const;
  double effective_group_index(Polarization pol, double wavelength_m) const;
  /// Degenerate signal/idler wavelength, 2 lambda_p.
  double degenerate_wavelength_m() const { return 2.0 * pump_wavelength_m; }
};

/// One phase-matched pair. H is the signal, V the idler.
struct PhaseMatchPoint {
  double lambda_h_m = 0.0;
  double lambda_v_m = 0.0;
  double residual_rad_per_m = 0.0;
  double temperature_c = 0.0;
  double poling_period_m = 0.0;
  bool degenerate = false;

  /// omega_H - omega_p / 2.
  double detuning_rad_per_s() const;
};

struct SolverOptions {
  double bracket_min_m = 1100e-9;
  double bracket_max_m = 1600e-9;
  int scan_points = 2001;
  double mismatch_tolerance = 1e-3;  // rad/m
  double merge_separation_m = 0.01e-9;
};

/// k_p - k_H - k_V - 2 pi / Lambda with k = 2 pi n / lambda.
double phase_mismatch(const WaveguideSpec& spec, double lambda_h_m, double lambda_v_m);

/// Mismatch on the CW energy line: omega_H = omega_p/2 + d, omega_V = omega_p/2 - d.
double phase_mismatch_at_detuning(const WaveguideSpec& spec, double detuning_rad_per_s);

/// All energy-conserving roots in the bracket, sorted by lambda_H.
std::vector<PhaseMatchPoint> solve_all_pairs(const WaveguideSpec& spec,
                                             const SolverOptions& options = {});

/// Root nearest to degeneracy, or nullopt if the bracket holds no sign change.
std::optional<PhaseMatchPoint> solve_pair(const WaveguideSpec& spec,
                                          const SolverOptions& options = {});

struct TuningSample {
  double parameter = 0.0;  // T in C, or Lambda in m
  std::optional<PhaseMatchPoint> point;
};

struct TuningCurve {
  enum class Axis { kTemperature, kPolingPeriod };
  Axis axis = Axis::kTemperature;
  std::vector<TuningSample> samples;
  /// Parameter at which lambda_H - lambda_V changes sign, linearly interpolated.
  std::optional<double> degeneracy_parameter;
};

/// Samples are returned in input order.
TuningCurve temperature_tuning_curve(const WaveguideSpec& spec,
                                     std::span<const double> temperatures_c,
                                     const SolverOptions& options = {});
TuningCurve poling_tuning_curve(const WaveguideSpec& spec, std::span<const double> periods_m,
                                const SolverOptions& options = {});

/// sinc(dk L / 2) on the energy line, phase referenced to the crystal midpoint.
std::complex<double> pm_amplitude(const WaveguideSpec& spec, double detuning_rad_per_s);

struct PhaseMatchBandwidth {
  double center_detuning_rad_per_s = 0.0;
  double fwhm_rad_per_s = 0.0;
  double fwhm_wavelength_m = 0.0;
  /// L (n_gH - n_gV) / c at the centre.
  double group_delay_mismatch_s = 0.0;
};

/// FWHM of |pm_amplitude|^2 around the solved centre. Throws DomainError if no root.
PhaseMatchBandwidth pm_bandwidth(const WaveguideSpec& spec, const SolverOptions& options = {});

struct CalibrationTarget {
  double pump_wavelength_m = 655e-9;
  double poling_period_m = 6.60e-6;
  double temperature_c = 72.0;
};

struct CalibrationReport {
  bool success = false;
  std::string message;
  WaveguideSpec spec;  // input spec with fitted offsets; calibrated flag set on success
  double uncalibrated_mismatch_rad_per_m = 0.0;  // at lambda_H = lambda_V = 2 lambda_p
  std::optional<PhaseMatchPoint> uncalibrated_point;
  std::optional<PhaseMatchPoint> calibrated_point;
  /// |lambda_H - 2 lambda_p| after calibration; nullopt if no root remains.
  std::optional<double> residual_wavelength_m;
};

/// Fit the minimum-norm offset pair that puts degeneracy at the target.
CalibrationReport calibrate(const WaveguideSpec& spec, const CalibrationTarget& target = {},
                            double offset_bound = 0.05, const SolverOptions& options = {});

}  // namespace pplnhom
