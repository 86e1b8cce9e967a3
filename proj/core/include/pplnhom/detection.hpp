#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pplnhom {

struct DetectorSpec {
  double efficiency = 0.04;
  double dark_rate_hz = 30e3;
  double coincidence_window_s = 1.0 / 90e6;  // 20 /s accidentals from 30 kHz darks

  void validate() const;
};

/// Per-arm transmission in front of each detector, source filters shared.
struct ChannelLosses {
  double highpass_filter = 0.9;
  double bandpass_filter = 0.7;
  double arm_a = 1.0;
  double arm_b = 1.0;

  void validate() const;
  double transmission_a() const { return highpass_filter * bandpass_filter * arm_a; }
  double transmission_b() const { return highpass_filter * bandpass_filter * arm_b; }
};

double db_to_transmission(double loss_db);

struct RateUncertainty {
  double singles_a = 0.0;
  double singles_b = 0.0;
  double coincidences = 0.0;
  double accidentals = 0.0;
  double pair_rate = 0.0;
};

struct RateReport {
  double singles_a = 0.0;         // includes darks
  double singles_b = 0.0;
  double coincidences = 0.0;      // true-pair coincidences, accidentals removed
  double accidentals = 0.0;
  double raw_coincidences = 0.0;  // coincidences + accidentals

  /// Pair rate from dark-subtracted singles and net coincidences.
  std::optional<double> pair_rate;
  /// S_a S_b / (2 R_raw) straight from the measured rates.
  std::optional<double> pair_rate_uncorrected;
  std::string estimator_error;
  std::optional<double> brightness;  // pairs s^-1 GHz^-1 mW^-1
  /// Mean number of pairs per coincidence window, N tau_w.
  double multi_pair_occupancy = 0.0;

  std::optional<RateUncertainty> uncertainty;  // Monte Carlo only
  double duration_s = 0.0;                     // Monte Carlo only
  std::uint64_t seed = 0;
};

/// S_x = N t_x eta_x + dark_x, R_c = N t_a t_b eta_a eta_b / 2, R_acc = 2 tau S_a S_b.
///
/// The pair is split by a 50/50 separation stage: each photon reaches a given
/// arm with probability 1/2, and coincidences need the photons in different arms.
RateReport analytic_rates(double pair_rate, const ChannelLosses& losses,
                          const DetectorSpec& det_a, const DetectorSpec& det_b);

/// S_a S_b / (2 R_c). Throws DomainError when R_c <= 0.
double estimate_pair_rate(double singles_a, double singles_b, double coincidences);

double normalized_brightness(double pair_rate, double pump_power_mw, double bandwidth_ghz);

/// 2 S_a S_b tau_w (two-sided window).
double accidental_rate(double singles_a, double singles_b, double window_s);

/// Window for which accidental_rate(S_a, S_b, tau) equals `target_rate`.
double calibrate_coincidence_window(double target_rate, double singles_a, double singles_b);

/// Fill pair_rate, pair_rate_uncorrected and estimator_error from the measured rates.
void apply_estimator(RateReport& report, double dark_a, double dark_b);

/// Common arm coupling t such that the singles and coincidence rates match the
/// targets with equal and opposite relative error (minimax fit).
double fit_arm_coupling(double pair_rate, double target_singles, double target_coincidences,
                        const DetectorSpec& detector, double filter_transmission);

struct DetectionEvent {
  enum class Channel : std::uint8_t { kA, kB };
  enum class Origin : std::uint8_t { kPair, kDark };
  double time_s;
  Channel channel;
  Origin origin;
};

struct MonteCarloOptions {
  double duration_s = 100.0;
  std::uint64_t seed = 1;
  double accidental_delay_s = 1e-6;  // offset of the background coincidence window
  bool record_events = false;
  std::size_t max_recorded_events = 1'000'000;
};

struct MonteCarloResult {
  RateReport report;
  std::uint64_t counts_a = 0;
  std::uint64_t counts_b = 0;
  std::uint64_t raw_coincidence_counts = 0;
  std::uint64_t delayed_coincidence_counts = 0;
  std::vector<DetectionEvent> events;
};

/// Event-level simulation: Poisson pair and dark streams, per-photon losses and
/// routing, zero-delay and delayed-window coincidence counting.
MonteCarloResult monte_carlo(double pair_rate, const ChannelLosses& losses,
                             const DetectorSpec& det_a, const DetectorSpec& det_b,
                             const MonteCarloOptions& options);

}  // namespace pplnhom
