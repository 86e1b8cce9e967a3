#include "pplnhom/qpm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pplnhom/constants.hpp"
#include "pplnhom/errors.hpp"

namespace pplnhom {

namespace {

// Half width of sinc^2 at half maximum, in units of dk L / 2.
constexpr double kSincHalfPoint = 1.3915573782515103;

double conjugate_wavelength(double pump_m, double lambda_m) {
  return 1.0 / (1.0 / pump_m - 1.0 / lambda_m);
}

double mismatch_on_line(const WaveguideSpec& spec, double lambda_h_m) {
  return phase_mismatch(spec, lambda_h_m, conjugate_wavelength(spec.pump_wavelength_m, lambda_h_m));
}

PhaseMatchPoint make_point(const WaveguideSpec& spec, double lambda_h_m,
                           const SolverOptions& options) {
  PhaseMatchPoint p;
  p.lambda_h_m = lambda_h_m;
  p.lambda_v_m = conjugate_wavelength(spec.pump_wavelength_m, lambda_h_m);
  p.residual_rad_per_m = phase_mismatch(spec, p.lambda_h_m, p.lambda_v_m);
  p.temperature_c = spec.temperature_c;
  p.poling_period_m = spec.poling_period_m;
  p.degenerate = std::abs(p.lambda_h_m - p.lambda_v_m) < options.merge_separation_m;
  return p;
}

// Bisection to the floating-point limit; the mismatch slope (~3e5 rad/m per nm)
// makes a wavelength tolerance alone too coarse.
double refine_root(const WaveguideSpec& spec, double lo, double hi, double f_lo) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = mismatch_on_line(spec, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double f_hi = mismatch_on_line(spec, hi);
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

TuningCurve tuning_curve(TuningCurve::Axis axis, const WaveguideSpec& spec,
                         std::span<const double> values, const SolverOptions& options) {
  TuningCurve curve;
  curve.axis = axis;
  curve.samples.reserve(values.size());
  for (double v : values) {
    WaveguideSpec s = spec;
    if (axis == TuningCurve::Axis::kTemperature)
      s.temperature_c = v;
    else
      s.poling_period_m = v;
    curve.samples.push_back({v, solve_pair(s, options)});
  }
  // Degeneracy crossing along the sampled order.
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& a = curve.samples[i].point;
    if (a && a->degenerate) {
      curve.degeneracy_parameter = curve.samples[i].parameter;
      break;
    }
    if (i + 1 == curve.samples.size()) break;
    const auto& b = curve.samples[i + 1].point;
    if (!a || !b) continue;
    const double da = a->lambda_h_m - a->lambda_v_m;
    const double db = b->lambda_h_m - b->lambda_v_m;
    if ((da < 0.0) != (db < 0.0)) {
      const double pa = curve.samples[i].parameter;
      const double pb = curve.samples[i + 1].parameter;
      curve.degeneracy_parameter = pa + (pb - pa) * da / (da - db);
      break;
    }
  }
  return curve;
}

}  // namespace

void WaveguideSpec::validate() const {
  if (!(length_m > 0.0)) throw ConfigError("waveguide length must be positive");
  if (!(poling_period_m > 0.0)) throw ConfigError("poling period must be positive");
  if (!(pump_wavelength_m > 0.0)) throw ConfigError("pump wavelength must be positive");
  if (!std::isfinite(temperature_c)) throw ConfigError("temperature must be finite");
  if (axes.h_axis() == axes.v_axis())
    throw ConfigError("H and V must map to distinct crystal axes");
}

double WaveguideSpec::effective_index(Polarization pol, double wavelength_m) const {
  return refractive_index(material, axes.axis_of(pol), wavelength_m, temperature_c) +
         index_offset(pol);
}

double WaveguideSpec::effective_group_index(Polarization pol, double wavelength_m) const {
  // A constant offset shifts n and n_g alike.
  return group_index(material, axes.axis_of(pol), wavelength_m, temperature_c) +
         index_offset(pol);
}

double PhaseMatchPoint::detuning_rad_per_s() const {
  return 0.5 * (angular_frequency(lambda_h_m) - angular_frequency(lambda_v_m));
}

double phase_mismatch(const WaveguideSpec& spec, double lambda_h_m, double lambda_v_m) {
  const double n_p = spec.effective_index(spec.axes.pump(), spec.pump_wavelength_m);
  const double n_h = spec.effective_index(Polarization::kH, lambda_h_m);
  const double n_v = spec.effective_index(Polarization::kV, lambda_v_m);
  return kTwoPi * (n_p / spec.pump_wavelength_m - n_h / lambda_h_m - n_v / lambda_v_m -
                   1.0 / spec.poling_period_m);
}

double phase_mismatch_at_detuning(const WaveguideSpec& spec, double detuning_rad_per_s) {
  const double half = 0.5 * angular_frequency(spec.pump_wavelength_m);
  return phase_mismatch(spec, wavelength_of(half + detuning_rad_per_s),
                        wavelength_of(half - detuning_rad_per_s));
}

std::vector<PhaseMatchPoint> solve_all_pairs(const WaveguideSpec& spec,
                                             const SolverOptions& options) {
  if (options.scan_points < 2 || !(options.bracket_min_m < options.bracket_max_m))
    throw DomainError("solver bracket must contain at least two scan points");
  std::vector<PhaseMatchPoint> roots;
  const int n = options.scan_points;
  const double span = options.bracket_max_m - options.bracket_min_m;
  double prev_x = options.bracket_min_m;
  double prev_f = mismatch_on_line(spec, prev_x);
  for (int i = 1; i < n; ++i) {
    const double x = options.bracket_min_m + span * i / (n - 1);
    const double f = mismatch_on_line(spec, x);
    if (prev_f == 0.0) {
      roots.push_back(make_point(spec, prev_x, options));
    } else if ((prev_f < 0.0) != (f < 0.0) && f != 0.0) {
      roots.push_back(make_point(spec, refine_root(spec, prev_x, x, prev_f), options));
    }
    prev_x = x;
    prev_f = f;
  }
  if (prev_f == 0.0) roots.push_back(make_point(spec, prev_x, options));
  std::erase_if(roots, [&](const PhaseMatchPoint& p) {
    return !(std::abs(p.residual_rad_per_m) < options.mismatch_tolerance);
  });
  return roots;
}

std::optional<PhaseMatchPoint> solve_pair(const WaveguideSpec& spec,
                                          const SolverOptions& options) {
  auto roots = solve_all_pairs(spec, options);
  if (roots.empty()) return std::nullopt;
  const double target = spec.degenerate_wavelength_m();
  return *std::min_element(roots.begin(), roots.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.lambda_h_m - target) < std::abs(b.lambda_h_m - target);
  });
}

TuningCurve temperature_tuning_curve(const WaveguideSpec& spec,
                                     std::span<const double> temperatures_c,
                                     const SolverOptions& options) {
  return tuning_curve(TuningCurve::Axis::kTemperature, spec, temperatures_c, options);
}

TuningCurve poling_tuning_curve(const WaveguideSpec& spec, std::span<const double> periods_m,
                                const SolverOptions& options) {
  return tuning_curve(TuningCurve::Axis::kPolingPeriod, spec, periods_m, options);
}

std::complex<double> pm_amplitude(const WaveguideSpec& spec, double detuning_rad_per_s) {
  const double x = 0.5 * phase_mismatch_at_detuning(spec, detuning_rad_per_s) * spec.length_m;
  return {x == 0.0 ? 1.0 : std::sin(x) / x, 0.0};
}

PhaseMatchBandwidth pm_bandwidth(const WaveguideSpec& spec, const SolverOptions& options) {
  const auto center = solve_pair(spec, options);
  if (!center) throw DomainError("pm_bandwidth: no phase-matched pair in the solver bracket");
  PhaseMatchBandwidth out;
  out.center_detuning_rad_per_s = center->detuning_rad_per_s();
  const double ng_h = spec.effective_group_index(Polarization::kH, center->lambda_h_m);
  const double ng_v = spec.effective_group_index(Polarization::kV, center->lambda_v_m);
  out.group_delay_mismatch_s = spec.length_m * (ng_h - ng_v) / kSpeedOfLight;
  if (out.group_delay_mismatch_s == 0.0)
    throw DomainError("pm_bandwidth: zero group-velocity mismatch gives unbounded bandwidth");

  // Linear estimate of the half-maximum offset, then bracket and bisect on the full model.
  const double guess = 2.0 * kSincHalfPoint / std::abs(out.group_delay_mismatch_s);
  auto excess = [&](double d) {
    return std::norm(pm_amplitude(spec, out.center_detuning_rad_per_s + d)) - 0.5;
  };
  auto edge = [&](double sign) {
    double inner = 0.0;
    double outer = 0.5 * guess;
    while (excess(sign * outer) > 0.0) {
      inner = outer;
      outer *= 1.5;
      if (outer > 100.0 * guess) throw DomainError("pm_bandwidth: half maximum not bracketed");
    }
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (inner + outer);
      if (mid <= inner || mid >= outer) break;
      (excess(sign * mid) > 0.0 ? inner : outer) = mid;
    }
    return 0.5 * (inner + outer);
  };
  out.fwhm_rad_per_s = edge(+1.0) + edge(-1.0);
  const double lambda = center->lambda_h_m;
  out.fwhm_wavelength_m = lambda * lambda / (kTwoPi * kSpeedOfLight) * out.fwhm_rad_per_s;
  return out;
}

CalibrationReport calibrate(const WaveguideSpec& spec, const CalibrationTarget& target,
                            double offset_bound, const SolverOptions& options) {
  CalibrationReport report;
  WaveguideSpec base = spec;
  base.pump_wavelength_m = target.pump_wavelength_m;
  base.poling_period_m = target.poling_period_m;
  base.temperature_c = target.temperature_c;
  base.index_offset_h = 0.0;
  base.index_offset_v = 0.0;
  base.calibrated = false;
  base.validate();

  const double lambda_d = base.degenerate_wavelength_m();
  report.uncalibrated_mismatch_rad_per_m = phase_mismatch(base, lambda_d, lambda_d);
  report.uncalibrated_point = solve_pair(base, options);

  // dk is linear in the offsets; take the minimum-norm solution.
  const bool pump_h = base.axes.pump() == Polarization::kH;
  const double g_h = kTwoPi * ((pump_h ? 1.0 : 0.0) / base.pump_wavelength_m - 1.0 / lambda_d);
  const double g_v = kTwoPi * ((pump_h ? 0.0 : 1.0) / base.pump_wavelength_m - 1.0 / lambda_d);
  const double g2 = g_h * g_h + g_v * g_v;
  if (g2 == 0.0) {
    report.message = "offsets do not enter the degenerate mismatch";
    report.spec = spec;
    return report;
  }
  const double scale = -report.uncalibrated_mismatch_rad_per_m / g2;
  double off_h = scale * g_h;
  double off_v = scale * g_v;

  const double largest = std::max(std::abs(off_h), std::abs(off_v));
  const bool reachable = largest < offset_bound;
  if (!reachable) {
    // Report how close the bounded offsets get.
    const double shrink = offset_bound / largest * (1.0 - 1e-12);
    off_h *= shrink;
    off_v *= shrink;
  }
  WaveguideSpec tuned = base;
  tuned.index_offset_h = off_h;
  tuned.index_offset_v = off_v;
  report.calibrated_point = solve_pair(tuned, options);
  if (report.calibrated_point)
    report.residual_wavelength_m = std::abs(report.calibrated_point->lambda_h_m - lambda_d);

  std::ostringstream msg;
  if (!reachable) {
    msg << "target unreachable: required offset " << largest << " exceeds bound "
        << offset_bound;
  } else if (!report.residual_wavelength_m || *report.residual_wavelength_m >= 0.01e-9) {
    msg << "solver did not confirm degeneracy after offset fit";
  } else {
    report.success = true;
    msg << "calibrated";
  }
  report.message = msg.str();
  report.spec = spec;
  report.spec.index_offset_h = off_h;
  report.spec.index_offset_v = off_v;
  report.spec.calibrated = report.success;
  return report;
}

}  // namespace pplnhom
