#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pplnhom/biphoton.hpp"

namespace pplnhom {

struct IndistinguishabilitySettings {
  double mode_overlap = 1.0;            // gamma in [0, 1]
  double interferometer_loss_db = 0.0;  // coincidence loss through the bench

  void validate() const;
  double transmission() const;
};

/// 1/2 - gamma/2 Re sum phi(d) phi*(-d) exp(2i d tau) step, with tau = tau_0 - delta_x / c.
double coincidence_probability(const TwoPhotonState& state, double delta_x_m,
                               const IndistinguishabilitySettings& settings = {});

/// start, start + step, ... up to stop (inclusive within rounding).
struct DelayRange {
  double start_m = 0.0;
  double stop_m = 0.0;
  double step_m = 0.0;

  std::vector<double> points() const;
  /// Range centred on `center_m`, with the centre itself a sample point.
  static DelayRange centered(double center_m, double half_width_m, double step_m);
};

struct HomScan {
  std::vector<double> delta_x_m;
  std::vector<double> coincidence_probability;
  std::vector<double> bump;  // >= 0
  std::vector<double> dip;   // <= 0; bump + dip = P_c - baseline
  double baseline = 0.5;     // distinguishable limit of the post-selected model
  IndistinguishabilitySettings settings;
  /// Coincidence counts per integration window, filled by convert_to_counts.
  std::vector<double> counts;
  double integration_s = 0.0;
};

struct BumpDipDecomposition {
  std::vector<double> delta_x_m;
  std::vector<double> bump;
  std::vector<double> dip;
};

/// Split P_c - 1/2 into a singlet-driven bump and the remaining dip.
///
/// The antisymmetric part phi_a(d) = (phi(d) - phi(-d)) / 2 produces the
/// signature +gamma/2 Re FT|phi_a|^2; the dip signature is the remainder.
/// Each signature is sign-sorted so bump >= 0 and dip <= 0 pointwise.
BumpDipDecomposition bump_dip_decomposition(const TwoPhotonState& state,
                                            std::span<const double> delta_x_m,
                                            const IndistinguishabilitySettings& settings = {});

HomScan scan(const TwoPhotonState& state, const DelayRange& range,
             const IndistinguishabilitySettings& settings = {});

/// Default scan: +-half_width around the walk-off compensation point.
HomScan scan_around_compensation(const TwoPhotonState& state, double half_width_m,
                                 double step_m,
                                 const IndistinguishabilitySettings& settings = {});

/// (R_max - R_min) / (R_max - R_acc).
double net_visibility(double r_max, double r_min, double r_acc);

struct DipMetrics {
  double visibility = 0.0;
  double fwhm_m = 0.0;
  double center_m = 0.0;
  double baseline = 0.0;
  double minimum = 0.0;
};

/// Throws DomainError if the scan does not extend 3 FWHM past the centre on both sides.
DipMetrics dip_metrics(const HomScan& scan);

/// Oscillation period of P_c in delta_x, from zero crossings and lobe extrema.
/// nullopt when the curve has no significant sign change.
std::optional<double> oscillation_period(const HomScan& scan);

/// Fill scan.counts: (far-delay coincidence rate * P_c / baseline + accidentals) * window.
void convert_to_counts(HomScan& scan, double far_coincidence_rate, double accidental_rate,
                       double integration_s = 5.0);

}  // namespace pplnhom
