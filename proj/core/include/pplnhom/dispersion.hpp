#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pplnhom {

enum class CrystalAxis { kOrdinary, kExtraordinary };
enum class Polarization { kH, kV };

std::string_view to_string(CrystalAxis axis);
std::string_view to_string(Polarization pol);
CrystalAxis parse_axis(std::string_view text);
Polarization parse_polarization(std::string_view text);

/// Temperature-dependent Sellmeier coefficients for one axis.
///
///   n^2 = a1 + (a2 + b1 F) / (lambda^2 - (a3 + b2 F)^2) + b3 F - a4 lambda^2
///   F   = (T - t_ref)(T + t_shift)
///
/// lambda in micrometres, T in degrees Celsius.
struct SellmeierCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
};

struct ValidityWindow {
  double wavelength_min_um = 0.4;
  double wavelength_max_um = 4.0;
  double temperature_min_c = 0.0;
  double temperature_max_c = 250.0;
};

class SellmeierModel {
 public:
  SellmeierModel(std::string name, SellmeierCoefficients ordinary,
                 SellmeierCoefficients extraordinary, ValidityWindow window,
                 double reference_temperature_c = 24.5,
                 double temperature_shift_c = 570.82);

  /// Congruent lithium niobate, also shipped as data/lithium_niobate_congruent.yaml.
  static SellmeierModel congruent_lithium_niobate();

  /// Parse a coefficient file (YAML). Throws ConfigError with line info.
  static SellmeierModel from_yaml(std::string_view text, std::string_view origin = "<string>");
  static SellmeierModel load(const std::filesystem::path& path);
  std::string to_yaml() const;

  const std::string& name() const { return name_; }
  const SellmeierCoefficients& coefficients(CrystalAxis axis) const;
  const ValidityWindow& window() const { return window_; }
  double reference_temperature_c() const { return t_ref_; }
  double temperature_shift_c() const { return t_shift_; }

  /// n^2 and d(n^2)/d(lambda_um) at lambda in micrometres. No range checks.
  struct Evaluation {
    double n_squared;
    double dn_squared_dlambda_um;
  };
  Evaluation evaluate(CrystalAxis axis, double wavelength_um, double temperature_c) const;

  /// Throws RangeError naming the violated bound.
  void check_range(double wavelength_m, double temperature_c) const;

 private:
  std::string name_;
  SellmeierCoefficients ordinary_;
  SellmeierCoefficients extraordinary_;
  ValidityWindow window_;
  double t_ref_;
  double t_shift_;
};

/// Which crystal axis each waveguide polarization travels on.
class AxisPolarizationMap {
 public:
  AxisPolarizationMap() = default;
  AxisPolarizationMap(CrystalAxis h_axis, CrystalAxis v_axis, Polarization pump);

  CrystalAxis axis_of(Polarization pol) const { return pol == Polarization::kH ? h_ : v_; }
  CrystalAxis h_axis() const { return h_; }
  CrystalAxis v_axis() const { return v_; }
  Polarization pump() const { return pump_; }
  CrystalAxis pump_axis() const { return axis_of(pump_); }

  friend bool operator==(const AxisPolarizationMap&, const AxisPolarizationMap&) = default;

 private:
  CrystalAxis h_ = CrystalAxis::kOrdinary;
  CrystalAxis v_ = CrystalAxis::kExtraordinary;
  Polarization pump_ = Polarization::kH;
};

double refractive_index(const SellmeierModel& model, CrystalAxis axis, double wavelength_m,
                        double temperature_c);

/// dn/dlambda in 1/m, from the analytic derivative of the Sellmeier form.
double index_slope(const SellmeierModel& model, CrystalAxis axis, double wavelength_m,
                   double temperature_c);

/// n - lambda dn/dlambda. The wavelength must lie strictly inside the window.
double group_index(const SellmeierModel& model, CrystalAxis axis, double wavelength_m,
                   double temperature_c);

/// |n_g(H axis) - n_g(V axis)|.
double group_birefringence(const SellmeierModel& model, const AxisPolarizationMap& axes,
                           double wavelength_m, double temperature_c);

/// Mean H/V delay L * dn_g / (2c), averaged over the pair creation point.
double walkoff_delay(double length_m, double group_birefringence);

}  // namespace pplnhom
