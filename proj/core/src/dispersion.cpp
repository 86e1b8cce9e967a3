#include "pplnhom/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "pplnhom/constants.hpp"
#include "pplnhom/errors.hpp"

namespace pplnhom {

namespace {

// Neighbourhood required around a group-index query, relative to lambda.
constexpr double kDerivativeMargin = 1e-4;

}  // namespace

std::string_view to_string(CrystalAxis axis) {
  return axis == CrystalAxis::kOrdinary ? "ordinary" : "extraordinary";
}

std::string_view to_string(Polarization pol) { return pol == Polarization::kH ? "H" : "V"; }

CrystalAxis parse_axis(std::string_view text) {
  if (text == "ordinary" || text == "o") return CrystalAxis::kOrdinary;
  if (text == "extraordinary" || text == "e") return CrystalAxis::kExtraordinary;
  throw ConfigError("unknown crystal axis '" + std::string(text) +
                    "' (expected ordinary|extraordinary)");
}

Polarization parse_polarization(std::string_view text) {
  if (text == "H" || text == "h") return Polarization::kH;
  if (text == "V" || text == "v") return Polarization::kV;
  throw ConfigError("unknown polarization '" + std::string(text) + "' (expected H|V)");
}

SellmeierModel::SellmeierModel(std::string name, SellmeierCoefficients ordinary,
                               SellmeierCoefficients extraordinary, ValidityWindow window,
                               double reference_temperature_c, double temperature_shift_c)
    : name_(std::move(name)),
      ordinary_(ordinary),
      extraordinary_(extraordinary),
      window_(window),
      t_ref_(reference_temperature_c),
      t_shift_(temperature_shift_c) {
  if (!(window_.wavelength_min_um > 0.0 && window_.wavelength_min_um < window_.wavelength_max_um))
    throw ConfigError("validity window: wavelength bounds must satisfy 0 < min < max");
  if (!(window_.temperature_min_c < window_.temperature_max_c))
    throw ConfigError("validity window: temperature bounds must satisfy min < max");
}

SellmeierModel SellmeierModel::congruent_lithium_niobate() {
  // Edwards & Lawrence form for congruent LiNbO3.
  const SellmeierCoefficients o{4.9048, 0.11775, 0.21802, 0.027153, 2.2314e-8, -2.9671e-8,
                                2.1429e-8};
  const SellmeierCoefficients e{4.5820, 0.099169, 0.21090, 0.021940, 5.2716e-8, -4.9143e-8,
                                2.2971e-7};
  return SellmeierModel("congruent LiNbO3", o, e, ValidityWindow{}, 24.5, 570.82);
}

const SellmeierCoefficients& SellmeierModel::coefficients(CrystalAxis axis) const {
  return axis == CrystalAxis::kOrdinary ? ordinary_ : extraordinary_;
}

SellmeierModel::Evaluation SellmeierModel::evaluate(CrystalAxis axis, double wavelength_um,
                                                    double temperature_c) const {
  const auto& c = coefficients(axis);
  const double f = (temperature_c - t_ref_) * (temperature_c + t_shift_);
  const double pole = c.a3 + c.b2 * f;
  const double l2 = wavelength_um * wavelength_um;
  const double denom = l2 - pole * pole;
  const double strength = c.a2 + c.b1 * f;
  Evaluation out{};
  out.n_squared = c.a1 + strength / denom + c.b3 * f - c.a4 * l2;
  out.dn_squared_dlambda_um =
      -2.0 * wavelength_um * strength / (denom * denom) - 2.0 * c.a4 * wavelength_um;
  return out;
}

void SellmeierModel::check_range(double wavelength_m, double temperature_c) const {
  const double um = wavelength_m / kMicrometre;
  auto fail = [&](const char* what, double value, double bound) {
    std::ostringstream msg;
    msg << name_ << ": " << what << " (value " << value << ", bound " << bound << ")";
    throw RangeError(msg.str());
  };
  if (!std::isfinite(um)) fail("wavelength is not finite", um, window_.wavelength_min_um);
  if (um < window_.wavelength_min_um)
    fail("wavelength below validity window [um]", um, window_.wavelength_min_um);
  if (um > window_.wavelength_max_um)
    fail("wavelength above validity window [um]", um, window_.wavelength_max_um);
  if (!std::isfinite(temperature_c))
    fail("temperature is not finite", temperature_c, window_.temperature_min_c);
  if (temperature_c < window_.temperature_min_c)
    fail("temperature below validity window [C]", temperature_c, window_.temperature_min_c);
  if (temperature_c > window_.temperature_max_c)
    fail("temperature above validity window [C]", temperature_c, window_.temperature_max_c);
}

AxisPolarizationMap::AxisPolarizationMap(CrystalAxis h_axis, CrystalAxis v_axis,
                                         Polarization pump)
    : h_(h_axis), v_(v_axis), pump_(pump) {
  if (h_ == v_)
    throw ConfigError("H and V must map to distinct crystal axes for type-II operation");
}

double refractive_index(const SellmeierModel& model, CrystalAxis axis, double wavelength_m,
                        double temperature_c) {
  model.check_range(wavelength_m, temperature_c);
  const auto ev = model.evaluate(axis, wavelength_m / kMicrometre, temperature_c);
  return std::sqrt(ev.n_squared);
}

double index_slope(const SellmeierModel& model, CrystalAxis axis, double wavelength_m,
                   double temperature_c) {
  model.check_range(wavelength_m, temperature_c);
  const auto ev = model.evaluate(axis, wavelength_m / kMicrometre, temperature_c);
  // dn/dlambda = (dn^2/dlambda) / (2n), converted from 1/um to 1/m.
  return ev.dn_squared_dlambda_um / (2.0 * std::sqrt(ev.n_squared)) / kMicrometre;
}

double group_index(const SellmeierModel& model, CrystalAxis axis, double wavelength_m,
                   double temperature_c) {
  model.check_range(wavelength_m * (1.0 - kDerivativeMargin), temperature_c);
  model.check_range(wavelength_m * (1.0 + kDerivativeMargin), temperature_c);
  const double n = refractive_index(model, axis, wavelength_m, temperature_c);
  return n - wavelength_m * index_slope(model, axis, wavelength_m, temperature_c);
}

double group_birefringence(const SellmeierModel& model, const AxisPolarizationMap& axes,
                           double wavelength_m, double temperature_c) {
  const double gh = group_index(model, axes.h_axis(), wavelength_m, temperature_c);
  const double gv = group_index(model, axes.v_axis(), wavelength_m, temperature_c);
  return std::abs(gh - gv);
}

double walkoff_delay(double length_m, double group_birefringence) {
  if (!(length_m > 0.0)) throw DomainError("walkoff_delay: length must be positive");
  return length_m * group_birefringence / (2.0 * kSpeedOfLight);
}

}  // namespace pplnhom
