#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pplnhom/dispersion.hpp"
#include "pplnhom/qpm.hpp"

namespace pplnhom {

/// phi(d) on the grid d_k = (k + 1/2 - n/2) * step, k = 0..n-1.
///
/// The grid is symmetric about d = 0 (omega_p / 2), so -d_k is the grid point
/// mirror(k) and the H/V exchange is exact on the grid.
class SpectralAmplitude {
 public:
  SpectralAmplitude() = default;
  SpectralAmplitude(double step_rad_per_s, std::vector<std::complex<double>> values,
                    double center_detuning_rad_per_s);

  std::size_t size() const { return values_.size(); }
  double step() const { return step_; }
  double center_detuning() const { return center_; }
  double detuning(std::size_t k) const {
    return (static_cast<double>(k) + 0.5 - 0.5 * static_cast<double>(size())) * step_;
  }
  std::size_t mirror(std::size_t k) const { return size() - 1 - k; }
  std::span<const std::complex<double>> values() const { return values_; }
  const std::complex<double>& operator[](std::size_t k) const { return values_[k]; }

  /// Sum |phi|^2 step.
  double norm() const;
  SpectralAmplitude normalized() const;
  /// FWHM of |phi|^2 from interpolated outermost half-maximum crossings.
  double intensity_fwhm() const;
  /// phi*(-d), the H/V exchanged amplitude.
  SpectralAmplitude conjugate_reflected() const;
  SpectralAmplitude with_global_phase(double radians) const;

 private:
  double step_ = 0.0;
  std::vector<std::complex<double>> values_;
  double center_ = 0.0;
};

/// |omega_p/2 + d>_H |omega_p/2 - d>_V weighted by phi(d) and exp(2i d tau).
struct TwoPhotonState {
  SpectralAmplitude amplitude;
  double pump_angular_frequency = 0.0;
  /// tau = delta_x / c: arrival delay of H behind V, walk-off minus any compensation.
  double arrival_offset_s = 0.0;
};

enum class MismatchModel {
  kLinearized,  // dk = -(n_gH - n_gV)(d - Delta)/c about the solved centre
  kExact,       // full Sellmeier mismatch on every grid point
};

struct GridOptions {
  std::size_t points = 4096;  // across +-half_width_fwhm about the centre
  double half_width_fwhm = 8.0;
  MismatchModel mismatch = MismatchModel::kLinearized;
};

/// Requires spec.calibrated. Throws DomainError if no phase-matched pair exists.
TwoPhotonState build_state(const WaveguideSpec& spec, const GridOptions& options = {});

/// 0.44 lambda^2 / (c dlambda).
double coherence_time(double wavelength_m, double bandwidth_m);

/// c dlambda / lambda^2 in Hz.
double bandwidth_to_frequency(double bandwidth_m, double wavelength_m);

/// Path difference delta_x in the H arm compensates walk-off: tau -> tau - delta_x / c.
TwoPhotonState apply_delay(TwoPhotonState state, double delta_x_m);

/// exp(2i d tau): phase of the exchanged term at detuning d.
std::complex<double> relative_phase(const TwoPhotonState& state, double detuning_rad_per_s);

/// Sum phi(d) phi*(-d) exp(2i d tau) step.
std::complex<double> exchange_overlap(const TwoPhotonState& state);

/// Singlet-sector weight (1 - Re X) / 2 of the polarization-frequency state.
double psi_minus_overlap(const TwoPhotonState& state);

/// Split of the state into a pure singlet part, a pure symmetric part and an
/// exchange-incoherent remainder; the three weights sum to one.
struct ExchangeFractions {
  double singlet = 0.0;
  double symmetric = 0.0;
  double product = 0.0;
};
ExchangeFractions exchange_fractions(const TwoPhotonState& state);

}  // namespace pplnhom
