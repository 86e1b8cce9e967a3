#include "pplnhom/detection.hpp"

#include <cmath>

#include "pplnhom/errors.hpp"

namespace pplnhom {

void DetectorSpec::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0))
    throw ConfigError("detector efficiency must lie in [0, 1]");
  if (!(dark_rate_hz >= 0.0)) throw ConfigError("dark rate must be >= 0");
  if (!(coincidence_window_s > 0.0)) throw ConfigError("coincidence window must be > 0");
}

void ChannelLosses::validate() const {
  for (double t : {highpass_filter, bandpass_filter, arm_a, arm_b}) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("transmissions must lie in (0, 1]");
  }
}

double db_to_transmission(double loss_db) {
  if (!(loss_db >= 0.0)) throw DomainError("loss in dB must be >= 0");
  return std::pow(10.0, -loss_db / 10.0);
}

RateReport analytic_rates(double pair_rate, const ChannelLosses& losses,
                          const DetectorSpec& det_a, const DetectorSpec& det_b) {
  if (!(pair_rate >= 0.0)) throw DomainError("pair rate must be >= 0");
  losses.validate();
  det_a.validate();
  det_b.validate();
  const double ua = losses.transmission_a() * det_a.efficiency;
  const double ub = losses.transmission_b() * det_b.efficiency;

  RateReport r;
  r.singles_a = pair_rate * ua + det_a.dark_rate_hz;
  r.singles_b = pair_rate * ub + det_b.dark_rate_hz;
  r.coincidences = 0.5 * pair_rate * ua * ub;
  const double window = std::max(det_a.coincidence_window_s, det_b.coincidence_window_s);
  r.accidentals = accidental_rate(r.singles_a, r.singles_b, window);
  r.raw_coincidences = r.coincidences + r.accidentals;
  r.multi_pair_occupancy = pair_rate * window;
  apply_estimator(r, det_a.dark_rate_hz, det_b.dark_rate_hz);
  return r;
}

double estimate_pair_rate(double singles_a, double singles_b, double coincidences) {
  if (!(coincidences > 0.0))
    throw DomainError("estimate_pair_rate: coincidence rate must be positive");
  return singles_a * singles_b / (2.0 * coincidences);
}

double normalized_brightness(double pair_rate, double pump_power_mw, double bandwidth_ghz) {
  if (!(pump_power_mw > 0.0)) throw DomainError("pump power must be positive");
  if (!(bandwidth_ghz > 0.0)) throw DomainError("bandwidth must be positive");
  return pair_rate / (pump_power_mw * bandwidth_ghz);
}

double accidental_rate(double singles_a, double singles_b, double window_s) {
  if (!(window_s > 0.0)) throw DomainError("coincidence window must be positive");
  return 2.0 * singles_a * singles_b * window_s;
}

double calibrate_coincidence_window(double target_rate, double singles_a, double singles_b) {
  if (!(singles_a > 0.0 && singles_b > 0.0))
    throw DomainError("window calibration needs positive singles");
  if (!(target_rate > 0.0)) throw DomainError("target accidental rate must be positive");
  return target_rate / (2.0 * singles_a * singles_b);
}

void apply_estimator(RateReport& r, double dark_a, double dark_b) {
  r.pair_rate.reset();
  r.pair_rate_uncorrected.reset();
  r.estimator_error.clear();
  try {
    r.pair_rate = estimate_pair_rate(r.singles_a - dark_a, r.singles_b - dark_b, r.coincidences);
    r.pair_rate_uncorrected = estimate_pair_rate(r.singles_a, r.singles_b, r.raw_coincidences);
  } catch (const DomainError& e) {
    r.estimator_error = e.what();
  }
}

double fit_arm_coupling(double pair_rate, double target_singles, double target_coincidences,
                        const DetectorSpec& detector, double filter_transmission) {
  if (!(pair_rate > 0.0 && target_singles > detector.dark_rate_hz && target_coincidences > 0.0))
    throw DomainError("fit_arm_coupling: targets must exceed the dark floor");
  const double k = filter_transmission * detector.efficiency;
  // Singles error rises with t and coincidence error rises faster; bisect on their balance.
  auto imbalance = [&](double t) {
    const double u = t * k;
    const double s = pair_rate * u + detector.dark_rate_hz;
    const double c = 0.5 * pair_rate * u * u;
    return (s / target_singles - 1.0) + (c / target_coincidences - 1.0);
  };
  double lo = 1e-12;
  double hi = 1.0;
  if (imbalance(hi) < 0.0) return hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (imbalance(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pplnhom
